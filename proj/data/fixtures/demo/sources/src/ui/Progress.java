package ui;

/** Progress draws the progress bar display. */
public class Progress {
    private int progressCount;
    private boolean active;

    // draws the progress bar display
    public void handleProgress(String input) {
        if (input == null) {
            return;
        }
        progressCount += input.length();
        active = true;
    }

    public int resetProgress() {
        int previous = progressCount;
        progressCount = 0;
        active = false;
        return previous;
    }
}
