package util;

/** Clock monotonic clock wrapper for timeouts. */
public class Clock {
    private int clockCount;
    private boolean active;

    // monotonic clock wrapper for timeouts
    public void handleClock(String input) {
        if (input == null) {
            return;
        }
        clockCount += input.length();
        active = true;
    }

    public int resetClock() {
        int previous = clockCount;
        clockCount = 0;
        active = false;
        return previous;
    }
}
