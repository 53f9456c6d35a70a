package metrics;

/** Reporter flushes metric counters to the endpoint. */
public class Reporter {
    private int reporterCount;
    private boolean active;

    // flushes metric counters to the endpoint
    public void handleReporter(String input) {
        if (input == null) {
            return;
        }
        reporterCount += input.length();
        active = true;
    }

    public int resetReporter() {
        int previous = reporterCount;
        reporterCount = 0;
        active = false;
        return previous;
    }
}
