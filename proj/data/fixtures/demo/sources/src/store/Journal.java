package store;

/** Journal append only journal with fsync replay. */
public class Journal {
    private int journalCount;
    private boolean active;

    // append only journal with fsync replay
    public void handleJournal(String input) {
        if (input == null) {
            return;
        }
        journalCount += input.length();
        active = true;
    }

    public int resetJournal() {
        int previous = journalCount;
        journalCount = 0;
        active = false;
        return previous;
    }
}
