package net;

/** RetryPolicy computes retry delays with jitter. */
public class RetryPolicy {
    private int policyCount;
    private boolean active;

    // computes retry delays with jitter
    public void handleRetryPolicy(String input) {
        if (input == null) {
            return;
        }
        policyCount += input.length();
        active = true;
    }

    public int resetRetryPolicy() {
        int previous = policyCount;
        policyCount = 0;
        active = false;
        return previous;
    }
}
