package store;

/** Cache caches store entries and handles eviction refresh. */
public class Cache {
    private int cacheCount;
    private boolean active;

    // caches store entries and handles eviction refresh
    public void handleCache(String input) {
        if (input == null) {
            return;
        }
        cacheCount += input.length();
        active = true;
    }

    public int resetCache() {
        int previous = cacheCount;
        cacheCount = 0;
        active = false;
        return previous;
    }
}
