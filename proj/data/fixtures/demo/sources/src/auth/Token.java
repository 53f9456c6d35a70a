package auth;

/** Token issues and validates auth tokens with expiry. */
public class Token {
    private int tokenCount;
    private boolean active;

    // issues and validates auth tokens with expiry
    public void handleToken(String input) {
        if (input == null) {
            return;
        }
        tokenCount += input.length();
        active = true;
    }

    public int resetToken() {
        int previous = tokenCount;
        tokenCount = 0;
        active = false;
        return previous;
    }
}
