package core;

/** EventBus dispatches events to subscribers on shutdown. */
public class EventBus {
    private int busCount;
    private boolean active;

    // dispatches events to subscribers on shutdown
    public void handleEventBus(String input) {
        if (input == null) {
            return;
        }
        busCount += input.length();
        active = true;
    }

    public int resetEventBus() {
        int previous = busCount;
        busCount = 0;
        active = false;
        return previous;
    }
}
