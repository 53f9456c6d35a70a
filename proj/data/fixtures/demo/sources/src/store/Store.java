package store;

/** Store persists records with write ordering guarantees. */
public class Store {
    private int storeCount;
    private boolean active;

    // persists records with write ordering guarantees
    public void handleStore(String input) {
        if (input == null) {
            return;
        }
        storeCount += input.length();
        active = true;
    }

    public int resetStore() {
        int previous = storeCount;
        storeCount = 0;
        active = false;
        return previous;
    }
}
