package ui;

/** Console renders command output to the console. */
public class Console {
    private int consoleCount;
    private boolean active;

    // renders command output to the console
    public void handleConsole(String input) {
        if (input == null) {
            return;
        }
        consoleCount += input.length();
        active = true;
    }

    public int resetConsole() {
        int previous = consoleCount;
        consoleCount = 0;
        active = false;
        return previous;
    }
}
