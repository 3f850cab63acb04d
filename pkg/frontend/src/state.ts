// Client-side mirror of the session room: who we are, what the server last
// said, and which interactions are currently legal. Never computes any
// score itself; every number on screen arrives from the service.

import {
    ConsensusBody,
    MovieSummary,
    SessionView,
    getConsensus,
    getSession,
} from "./api";

export const POLL_INTERVAL_MS = 2000;

export interface RoomState {
    sessionId: string | null;
    participantId: string | null;
    movies: MovieSummary[];
    session: SessionView | null;
    consensus: ConsensusBody | null;
    lastError: string | null;
}

export function initialState(): RoomState {
    return {
        sessionId: null,
        participantId: null,
        movies: [],
        session: null,
        consensus: null,
        lastError: null,
    };
}

/** Sliders are live only while the server is collecting feedback. */
export function feedbackEnabled(state: RoomState): boolean {
    return state.session?.state === "Recommended";
}

/** Favorites can be picked while gathering or after a failed consensus. */
export function favoriteEditable(state: RoomState): boolean {
    const s = state.session?.state;
    return s === "Gathering" || s === "ReEvaluating" || state.session === null;
}

export function feedbackHint(state: RoomState): string | null {
    switch (state.session?.state) {
        case undefined:
        case "Gathering":
            return "Waiting for a recommendation before feedback opens.";
        case "ReEvaluating":
            return "Consensus failed; adjust favorites and rerun the recommendation.";
        case "ConsensusReached":
            return "Consensus reached; this round is closed.";
        default:
            return null;
    }
}

/** Clamp a slider/input reading into the 0-10 score range. */
export function clampScore(value: number): number {
    if (Number.isNaN(value)) return 0;
    return Math.min(10, Math.max(0, value));
}

export function searchMovies(movies: MovieSummary[], query: string): MovieSummary[] {
    const needle = query.trim().toLowerCase();
    if (!needle) return movies;
    return movies.filter(m =>
        m.title.toLowerCase().includes(needle) ||
        m.genres.some(g => g.toLowerCase().includes(needle)));
}

/**
 * One polling step: refresh the session view and, when at least two
 * participants have submitted, the (possibly partial) consensus body.
 * Partial reads are effect-free on the server.
 */
export async function pollOnce(state: RoomState): Promise<RoomState> {
    if (!state.sessionId) return state;
    const next: RoomState = { ...state };
    try {
        next.session = await getSession(state.sessionId);
        next.lastError = null;
    } catch (err) {
        next.lastError = err instanceof Error ? err.message : String(err);
        return next;
    }
    const submitted = next.session.feedback_submitted.length;
    const everyone = next.session.participants.length > 0 &&
        submitted === next.session.participants.length;
    if (submitted >= 2) {
        try {
            next.consensus = await getConsensus(state.sessionId, !everyone);
        } catch {
            // Feedback round may have been reset between the two requests.
        }
    } else if (next.session.state === "Recommended") {
        next.consensus = null;
    }
    return next;
}

export type PollHandle = { stop: () => void };

export function startPolling(
    getState: () => RoomState,
    apply: (next: RoomState) => void,
    intervalMs: number = POLL_INTERVAL_MS,
): PollHandle {
    let inFlight = false;
    const timer = setInterval(async () => {
        if (inFlight) return;
        inFlight = true;
        try {
            apply(await pollOnce(getState()));
        } finally {
            inFlight = false;
        }
    }, intervalMs);
    return { stop: () => clearInterval(timer) };
}
