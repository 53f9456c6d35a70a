package net;

/** Connection manages a pooled network connection. */
public class Connection {
    private int connectionCount;
    private boolean active;

    // manages a pooled network connection
    public void handleConnection(String input) {
        if (input == null) {
            return;
        }
        connectionCount += input.length();
        active = true;
    }

    public int resetConnection() {
        int previous = connectionCount;
        connectionCount = 0;
        active = false;
        return previous;
    }
}
