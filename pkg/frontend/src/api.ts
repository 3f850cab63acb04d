// Typed client for the /v1 session service. All computation happens
// server-side; this module only moves JSON.

export type SessionState =
    "Gathering" |
    "Recommended" |
    "ConsensusReached" |
    "ReEvaluating";

export interface MovieSummary {
    id: string;
    title: string;
    genres: string[];
}

export interface EmotionProfile {
    happy: number;
    angry: number;
    surprise: number;
    sad: number;
    fear: number;
}

export interface MovieEmotions {
    id: string;
    title: string;
    profile: EmotionProfile;
}

export interface RankedEntry {
    movie_id: string;
    score: number;
    per_participant: number[];
    genre_affinity: number;
}

export interface Recommendation {
    ranking: RankedEntry[];
}

export interface ParticipantView {
    id: string;
    name: string;
    favorite: string;
}

export interface SessionView {
    id: string;
    state: SessionState;
    candidates: string[];
    participants: ParticipantView[];
    feedback_submitted: string[];
    recommendation: Recommendation | null;
}

export interface ConsensusBody {
    participants: Record<string, number>;
    iqr: number;
    mean: number;
    level: string;
    verdict: string;
    state: SessionState;
    partial: boolean;
}

export interface FieldError {
    loc: (string | number)[];
    msg: string;
}

/** Error carrying the status and the service's verbatim detail payload. */
export class ApiError extends Error {
    status: number;
    detail: string | FieldError[];

    constructor(status: number, detail: string | FieldError[]) {
        super(typeof detail === "string" ? detail : detail.map(d => d.msg).join("; "));
        this.status = status;
        this.detail = detail;
    }

    /** Field names from 422 validation details, for input highlighting. */
    fields(): string[] {
        if (typeof this.detail === "string") return [];
        return this.detail.map(d => String(d.loc[d.loc.length - 1]));
    }
}

let baseUrl = "";

export function setBaseUrl(url: string) {
    baseUrl = url.replace(/\/$/, "");
}

async function request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(`${baseUrl}${path}`, init);
    let body: unknown = null;
    try {
        body = await response.json();
    } catch {
        body = null;
    }
    if (!response.ok) {
        const detail = (body as { detail?: string | FieldError[] } | null)?.detail;
        throw new ApiError(response.status, detail ?? `HTTP ${response.status}`);
    }
    return body as T;
}

function post<T>(path: string, payload?: unknown): Promise<T> {
    return request<T>(path, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: payload === undefined ? undefined : JSON.stringify(payload),
    });
}

export function listMovies(): Promise<{ movies: MovieSummary[] }> {
    return request("/v1/movies");
}

export function movieEmotions(movieId: string): Promise<MovieEmotions> {
    return request(`/v1/movies/${encodeURIComponent(movieId)}/emotions`);
}

export function createSession(candidates: string[]): Promise<{ id: string; state: SessionState }> {
    return post("/v1/sessions", { candidates });
}

export function getSession(sessionId: string): Promise<SessionView> {
    return request(`/v1/sessions/${encodeURIComponent(sessionId)}`);
}

export function addParticipant(
    sessionId: string, id: string, name: string, favorite: string,
): Promise<SessionView> {
    return post(`/v1/sessions/${encodeURIComponent(sessionId)}/participants`, { id, name, favorite });
}

export function requestRecommendation(sessionId: string): Promise<Recommendation> {
    return post(`/v1/sessions/${encodeURIComponent(sessionId)}/recommend`);
}

export function submitFeedback(
    sessionId: string, participant: string, agreement: number, confidence: number,
): Promise<{ participant: string; submitted: number; expected: number }> {
    return post(`/v1/sessions/${encodeURIComponent(sessionId)}/feedback`, {
        participant, agreement, confidence,
    });
}

export function getConsensus(sessionId: string, partial = false): Promise<ConsensusBody> {
    const query = partial ? "?partial=true" : "";
    return request(`/v1/sessions/${encodeURIComponent(sessionId)}/consensus${query}`);
}
