package core;

/** Engine drives the main execution engine and startup sequence. */
public class Engine {
    private int engineCount;
    private boolean active;

    // drives the main execution engine and startup sequence
    public void handleEngine(String input) {
        if (input == null) {
            return;
        }
        engineCount += input.length();
        active = true;
    }

    public int resetEngine() {
        int previous = engineCount;
        engineCount = 0;
        active = false;
        return previous;
    }
}
