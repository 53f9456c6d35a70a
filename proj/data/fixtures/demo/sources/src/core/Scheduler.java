package core;

/** Scheduler schedules periodic tasks and handles lifecycle stop. */
public class Scheduler {
    private int schedulerCount;
    private boolean active;

    // schedules periodic tasks and handles lifecycle stop
    public void handleScheduler(String input) {
        if (input == null) {
            return;
        }
        schedulerCount += input.length();
        active = true;
    }

    public int resetScheduler() {
        int previous = schedulerCount;
        schedulerCount = 0;
        active = false;
        return previous;
    }
}
