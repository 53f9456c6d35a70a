package ui;

/** Table formats rows into an aligned table. */
public class Table {
    private int tableCount;
    private boolean active;

    // formats rows into an aligned table
    public void handleTable(String input) {
        if (input == null) {
            return;
        }
        tableCount += input.length();
        active = true;
    }

    public int resetTable() {
        int previous = tableCount;
        tableCount = 0;
        active = false;
        return previous;
    }
}
