package util;

/** Strings string helpers for padding and trimming. */
public class Strings {
    private int stringsCount;
    private boolean active;

    // string helpers for padding and trimming
    public void handleStrings(String input) {
        if (input == null) {
            return;
        }
        stringsCount += input.length();
        active = true;
    }

    public int resetStrings() {
        int previous = stringsCount;
        stringsCount = 0;
        active = false;
        return previous;
    }
}
