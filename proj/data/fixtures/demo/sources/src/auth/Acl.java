package auth;

/** Acl checks access control lists per user. */
public class Acl {
    private int aclCount;
    private boolean active;

    // checks access control lists per user
    public void handleAcl(String input) {
        if (input == null) {
            return;
        }
        aclCount += input.length();
        active = true;
    }

    public int resetAcl() {
        int previous = aclCount;
        aclCount = 0;
        active = false;
        return previous;
    }
}
