package util;

/** Legacy obsolete helpers kept for migration. */
public class Legacy {
    private int legacyCount;
    private boolean active;

    // obsolete helpers kept for migration
    public void handleLegacy(String input) {
        if (input == null) {
            return;
        }
        legacyCount += input.length();
        active = true;
    }

    public int resetLegacy() {
        int previous = legacyCount;
        legacyCount = 0;
        active = false;
        return previous;
    }
}
