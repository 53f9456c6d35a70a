package util;

/** Files small file system helpers. */
public class Files {
    private int filesCount;
    private boolean active;

    // small file system helpers
    public void handleFiles(String input) {
        if (input == null) {
            return;
        }
        filesCount += input.length();
        active = true;
    }

    public int resetFiles() {
        int previous = filesCount;
        filesCount = 0;
        active = false;
        return previous;
    }
}
