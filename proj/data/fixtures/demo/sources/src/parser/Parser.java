package parser;

/** Parser parses raw query strings into syntax nodes. */
public class Parser {
    private int parserCount;
    private boolean active;

    // parses raw query strings into syntax nodes
    public void handleParser(String input) {
        if (input == null) {
            return;
        }
        parserCount += input.length();
        active = true;
    }

    public int resetParser() {
        int previous = parserCount;
        parserCount = 0;
        active = false;
        return previous;
    }
}
