import type { AssistResponse } from "./types.js";

/**
 * Debounced assist requests with monotonically increasing serials.
 *
 * At most one request fires per quiet period; every request carries the
 * next serial, and responses arriving with a serial below the highest one
 * already accepted are dropped, so slow answers can never overwrite the
 * state of a newer request.
 */
export class QueryScheduler {
    private timer: ReturnType<typeof setTimeout> | undefined;
    private serial = 0;
    private maxSeen = -1;

    constructor(
        private readonly perform: (
            text: string,
            serial: number,
        ) => Promise<AssistResponse>,
        private readonly onFresh: (response: AssistResponse) => void,
        private readonly onError: (error: unknown) => void = () => {},
        readonly debounceMs: number = 500,
    ) {
        if (debounceMs <= 0) throw new Error("debounceMs must be positive");
    }

    /** Called on every keystroke; empty input issues no request. */
    input(text: string): void {
        if (this.timer !== undefined) clearTimeout(this.timer);
        this.timer = undefined;
        if (!text.trim()) return;
        this.timer = setTimeout(() => {
            this.timer = undefined;
            void this.fire(text);
        }, this.debounceMs);
    }

    /** Next serial this scheduler will hand out (for confirm-time checks). */
    get lastSerial(): number {
        return this.serial;
    }

    private async fire(text: string): Promise<void> {
        const serial = ++this.serial;
        try {
            this.accept(await this.perform(text, serial));
        } catch (error) {
            this.onError(error);
        }
    }

    /** Feed a response in; stale serials are ignored. */
    accept(response: AssistResponse): void {
        if (response.serial < this.maxSeen) return;
        this.maxSeen = response.serial;
        this.onFresh(response);
    }

    dispose(): void {
        if (this.timer !== undefined) clearTimeout(this.timer);
        this.timer = undefined;
    }
}
