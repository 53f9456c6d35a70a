package parser;

/** Tokenizer splits query input into tokens. */
public class Tokenizer {
    private int tokenizerCount;
    private boolean active;

    // splits query input into tokens
    public void handleTokenizer(String input) {
        if (input == null) {
            return;
        }
        tokenizerCount += input.length();
        active = true;
    }

    public int resetTokenizer() {
        int previous = tokenizerCount;
        tokenizerCount = 0;
        active = false;
        return previous;
    }
}
