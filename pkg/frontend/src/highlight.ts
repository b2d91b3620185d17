import type { Tag } from "./types.js";

/** CSS class per highlight intensity: none, warn, or bad. */
export type HighlightClass = "" | "qe-warn" | "qe-bad";

/**
 * Bucket an intensity in [0, 1] into a severity class.
 * 0 maps to no class, (0, 0.5] to "qe-warn", (0.5, 1] to "qe-bad";
 * out-of-range values are clamped so the mapping stays total.
 */
export function intensityClass(intensity: number): HighlightClass {
    const value = Math.min(1, Math.max(0, intensity));
    if (value === 0) return "";
    return value <= 0.5 ? "qe-warn" : "qe-bad";
}

/** Target-side class for a word-level tag. */
export function tagClass(tag: Tag): HighlightClass {
    return tag === "BAD" ? "qe-bad" : "";
}

/**
 * Per-token classes for a token list and its intensities.
 * A length mismatch renders no highlights and reports a diagnostic
 * instead of crashing the view.
 */
export function renderHighlights(
    tokens: string[],
    intensities: number[],
    diagnostic: (message: string) => void = (m) => console.warn(m),
): HighlightClass[] {
    if (tokens.length !== intensities.length) {
        diagnostic(
            `highlight mismatch: ${tokens.length} tokens vs ` +
                `${intensities.length} intensities`,
        );
        return tokens.map(() => "");
    }
    return intensities.map(intensityClass);
}
