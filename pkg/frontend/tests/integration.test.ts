import { execFile, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { promisify } from "node:util";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { intensityClass } from "../src/highlight.js";
import { SessionController } from "../src/session.js";
import type { Stimulus } from "../src/types.js";

const execFileAsync = promisify(execFile);

const PORT = 8700 + Math.floor(Math.random() * 900);
const BASE_URL = `http://127.0.0.1:${PORT}`;

let workDir: string;
let logPath: string;
let stimuliPath: string;
let server: ChildProcess | undefined;

async function waitFor(
    predicate: () => boolean | Promise<boolean>,
    timeoutMs: number,
    label: string,
): Promise<void> {
    const deadline = Date.now() + timeoutMs;
    for (;;) {
        if (await predicate()) return;
        if (Date.now() > deadline) throw new Error(`timeout waiting for ${label}`);
        await new Promise((resolve) => setTimeout(resolve, 50));
    }
}

async function serverReady(): Promise<boolean> {
    try {
        const response = await fetch(`${BASE_URL}/engines`);
        return response.ok;
    } catch {
        return false;
    }
}

beforeAll(async () => {
    workDir = mkdtempSync(join(tmpdir(), "outtrans-ui-"));
    logPath = join(workDir, "events.jsonl");
    stimuliPath = join(workDir, "stimuli.tsv");

    writeFileSync(join(workDir, "dict.json"), "{}");
    writeFileSync(join(workDir, "base.src"), "wo ist das rathaus\nwo ist die post\n");
    writeFileSync(join(workDir, "base.tgt"), "wo ist das rathaus\nwo ist die post\n");
    writeFileSync(
        join(workDir, "service.json"),
        JSON.stringify({
            engines: [
                {
                    id: "mock",
                    kind: "mock",
                    pairs: [["cs", "de"]],
                    dictionary: "dict.json",
                    token_limit: 100,
                },
            ],
            baselines: { "cs-de": { src: "base.src", tgt: "base.tgt" } },
        }),
    );
    writeFileSync(stimuliPath, "st1\ttech\tKde je radnice?\n");

    server = spawn(
        "python3",
        [
            "-m", "outtrans.cli", "serve",
            "--config", join(workDir, "service.json"),
            "--log", logPath,
            "--port", String(PORT),
        ],
        { cwd: workDir, stdio: "ignore" },
    );
    await waitFor(serverReady, 30_000, "service startup");
}, 40_000);

afterAll(() => {
    server?.kill();
});

describe("scripted session against the real service", () => {
    it(
        "replays into exactly one finished segment with edits",
        async () => {
            const api = new ApiClient(BASE_URL);
            const stimuli: Stimulus[] = [
                { sid: "st1", domain: "tech", text: "Kde je radnice?" },
            ];
            const controller = new SessionController(api, stimuli, {
                session: "browser-1",
                queue: "q-it",
                engine: "mock",
                debounceMs: 30,
            });

            await controller.login();
            expect(controller.state.stimulus?.sid).toBe("st1");

            controller.handleInput("Wo ist Rathaus?");
            await waitFor(
                () => controller.state.txt2 === "Wo ist Rathaus?",
                10_000,
                "first revision",
            );
            // highlight intensities map into the class buckets
            for (const intensity of controller.state.highlight) {
                expect(["", "qe-warn", "qe-bad"]).toContain(
                    intensityClass(intensity),
                );
            }

            controller.handleInput("Wo ist das Rathaus?");
            await waitFor(
                () => controller.state.txt2 === "Wo ist das Rathaus?",
                10_000,
                "second revision",
            );
            expect(controller.state.txt3).toBe("Wo ist das Rathaus?");

            await controller.confirm();
            expect(controller.state.finishedAll).toBe(true);
            expect(controller.eventBacklog).toBe(0);

            const { stdout } = await execFileAsync("python3", [
                "-m", "outtrans.cli", "analyze", "segments",
                "--log", logPath,
                "--stimuli", stimuliPath,
            ]);
            const rows = stdout.trim().split("\n").map((line) => line.split(","));
            const header = rows[0];
            const all = rows.find((row) => row[0] === "All");
            expect(all).toBeDefined();
            const cell = (name: string) => Number(all![header.indexOf(name)]);
            expect(cell("segments")).toBe(1);
            expect(cell("finished")).toBe(1);
            expect(cell("with_edits")).toBe(1);
            expect(cell("linear")).toBe(0);
            expect(cell("skipped")).toBe(0);
        },
        60_000,
    );
});
