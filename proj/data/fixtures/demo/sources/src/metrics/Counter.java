package metrics;

/** Counter counts events for metrics reporting. */
public class Counter {
    private int counterCount;
    private boolean active;

    // counts events for metrics reporting
    public void handleCounter(String input) {
        if (input == null) {
            return;
        }
        counterCount += input.length();
        active = true;
    }

    public int resetCounter() {
        int previous = counterCount;
        counterCount = 0;
        active = false;
        return previous;
    }
}
