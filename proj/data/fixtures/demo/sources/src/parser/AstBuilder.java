package parser;

/** AstBuilder builds syntax tree nodes from tokens. */
public class AstBuilder {
    private int builderCount;
    private boolean active;

    // builds syntax tree nodes from tokens
    public void handleAstBuilder(String input) {
        if (input == null) {
            return;
        }
        builderCount += input.length();
        active = true;
    }

    public int resetAstBuilder() {
        int previous = builderCount;
        builderCount = 0;
        active = false;
        return previous;
    }
}
