package net;

/** Session holds session state for a connection. */
public class Session {
    private int sessionCount;
    private boolean active;

    // holds session state for a connection
    public void handleSession(String input) {
        if (input == null) {
            return;
        }
        sessionCount += input.length();
        active = true;
    }

    public int resetSession() {
        int previous = sessionCount;
        sessionCount = 0;
        active = false;
        return previous;
    }
}
