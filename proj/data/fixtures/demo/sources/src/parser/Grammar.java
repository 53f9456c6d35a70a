package parser;

/** Grammar declares grammar rules for quoted literals. */
public class Grammar {
    private int grammarCount;
    private boolean active;

    // declares grammar rules for quoted literals
    public void handleGrammar(String input) {
        if (input == null) {
            return;
        }
        grammarCount += input.length();
        active = true;
    }

    public int resetGrammar() {
        int previous = grammarCount;
        grammarCount = 0;
        active = false;
        return previous;
    }
}
