package core;

/** Config loads configuration values and propagates updates. */
public class Config {
    private int configCount;
    private boolean active;

    // loads configuration values and propagates updates
    public void handleConfig(String input) {
        if (input == null) {
            return;
        }
        configCount += input.length();
        active = true;
    }

    public int resetConfig() {
        int previous = configCount;
        configCount = 0;
        active = false;
        return previous;
    }
}
