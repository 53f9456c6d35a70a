package auth;

/** Login validates login credentials and timeouts. */
public class Login {
    private int loginCount;
    private boolean active;

    // validates login credentials and timeouts
    public void handleLogin(String input) {
        if (input == null) {
            return;
        }
        loginCount += input.length();
        active = true;
    }

    public int resetLogin() {
        int previous = loginCount;
        loginCount = 0;
        active = false;
        return previous;
    }
}
