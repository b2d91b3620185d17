import type { EventRecord } from "./types.js";

/**
 * Posts interaction events to the logger endpoint.
 *
 * A failed post is retried once; if the retry also fails the record stays
 * in a local queue and is flushed, in order, the next time a post goes
 * through. Events therefore never get lost or reordered on flaky links.
 */
export class EventReporter {
    private pending: EventRecord[] = [];

    constructor(
        private readonly post: (record: EventRecord) => Promise<void>,
        private readonly session: string,
        private readonly now: () => number = () => Date.now() / 1000,
    ) {}

    get queuedCount(): number {
        return this.pending.length;
    }

    async emit(code: string, payload: Record<string, unknown>): Promise<void> {
        this.pending.push({
            ts: this.now(),
            session: this.session,
            code,
            ...payload,
        });
        await this.flush();
    }

    /** Deliver queued records front to back; stop at the first failure. */
    async flush(): Promise<void> {
        while (this.pending.length > 0) {
            if (!(await this.tryPost(this.pending[0]))) return;
            this.pending.shift();
        }
    }

    private async tryPost(record: EventRecord): Promise<boolean> {
        try {
            await this.post(record);
            return true;
        } catch {
            try {
                await this.post(record);
                return true;
            } catch {
                return false;
            }
        }
    }
}
