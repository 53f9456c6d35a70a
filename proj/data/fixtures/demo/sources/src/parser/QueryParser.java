package parser;

/** QueryParser parses quoted query strings into syntax nodes. */
public class QueryParser {
    private int parserCount;
    private boolean active;

    // parses quoted query strings into syntax nodes
    public void handleQueryParser(String input) {
        if (input == null) {
            return;
        }
        parserCount += input.length();
        active = true;
    }

    public int resetQueryParser() {
        int previous = parserCount;
        parserCount = 0;
        active = false;
        return previous;
    }
}
