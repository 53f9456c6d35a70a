package util;

/** Pool object pool with bounded capacity. */
public class Pool {
    private int poolCount;
    private boolean active;

    // object pool with bounded capacity
    public void handlePool(String input) {
        if (input == null) {
            return;
        }
        poolCount += input.length();
        active = true;
    }

    public int resetPool() {
        int previous = poolCount;
        poolCount = 0;
        active = false;
        return previous;
    }
}
