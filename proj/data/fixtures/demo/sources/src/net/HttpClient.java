package net;

/** HttpClient sends http requests with retry backoff. */
public class HttpClient {
    private int clientCount;
    private boolean active;

    // sends http requests with retry backoff
    public void handleHttpClient(String input) {
        if (input == null) {
            return;
        }
        clientCount += input.length();
        active = true;
    }

    public int resetHttpClient() {
        int previous = clientCount;
        clientCount = 0;
        active = false;
        return previous;
    }
}
