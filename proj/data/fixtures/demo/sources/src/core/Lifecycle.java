package core;

/** Lifecycle tracks component lifecycle transitions. */
public class Lifecycle {
    private int lifecycleCount;
    private boolean active;

    // tracks component lifecycle transitions
    public void handleLifecycle(String input) {
        if (input == null) {
            return;
        }
        lifecycleCount += input.length();
        active = true;
    }

    public int resetLifecycle() {
        int previous = lifecycleCount;
        lifecycleCount = 0;
        active = false;
        return previous;
    }
}
