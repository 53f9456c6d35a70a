package store;

/** Index maintains the lookup index over stored records. */
public class Index {
    private int indexCount;
    private boolean active;

    // maintains the lookup index over stored records
    public void handleIndex(String input) {
        if (input == null) {
            return;
        }
        indexCount += input.length();
        active = true;
    }

    public int resetIndex() {
        int previous = indexCount;
        indexCount = 0;
        active = false;
        return previous;
    }
}
