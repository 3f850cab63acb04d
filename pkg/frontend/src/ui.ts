// DOM rendering for the session room. Numbers coming from the service are
// rendered with String() and never recomputed or reformatted locally, so
// what the panel shows is exactly what the payload said.

import { ApiError, ConsensusBody, EmotionProfile, MovieSummary, RankedEntry, SessionView } from "./api";
import { RoomState, feedbackEnabled, feedbackHint, searchMovies } from "./state";

const EMOTIONS: (keyof EmotionProfile)[] = ["happy", "angry", "surprise", "sad", "fear"];

function el<K extends keyof HTMLElementTagNameMap>(
    tag: K, className?: string, text?: string,
): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag);
    if (className) node.className = className;
    if (text !== undefined) node.textContent = text;
    return node;
}

export function renderProfileBars(profile: EmotionProfile): HTMLElement {
    const wrap = el("div", "profile-bars");
    for (const emotion of EMOTIONS) {
        const row = el("div", "bar-row");
        row.append(el("span", "bar-label", emotion));
        const track = el("div", "bar-track");
        const fill = el("div", `bar-fill bar-${emotion}`);
        // Width is layout, not a displayed figure; the printed number is verbatim.
        fill.style.width = `${Math.min(100, Math.max(0, profile[emotion] * 100))}%`;
        track.append(fill);
        row.append(track);
        row.append(el("span", "bar-value", String(profile[emotion])));
        wrap.append(row);
    }
    return wrap;
}

export function renderCatalog(
    movies: MovieSummary[],
    query: string,
    onPick: (movieId: string) => void,
    profiles: Map<string, EmotionProfile>,
): HTMLElement {
    const wrap = el("div", "catalog");
    const list = el("ul", "catalog-list");
    for (const movie of searchMovies(movies, query)) {
        const item = el("li", "catalog-item");
        const button = el("button", "pick-favorite", movie.title);
        button.dataset.movieId = movie.id;
        button.addEventListener("click", () => onPick(movie.id));
        item.append(button);
        item.append(el("span", "genres", movie.genres.join(", ")));
        const profile = profiles.get(movie.id);
        if (profile) item.append(renderProfileBars(profile));
        list.append(item);
    }
    wrap.append(list);
    return wrap;
}

export function renderRanking(
    ranking: RankedEntry[],
    titles: Map<string, string>,
    profiles: Map<string, EmotionProfile>,
): HTMLElement {
    const wrap = el("div", "ranking");
    wrap.append(el("h2", undefined, "Recommendation"));
    const list = el("ol", "ranking-list");
    for (const entry of ranking) {
        const item = el("li", "ranking-item");
        item.dataset.movieId = entry.movie_id;
        item.append(el("strong", "ranked-title", titles.get(entry.movie_id) ?? entry.movie_id));
        item.append(el("span", "ranked-score", String(entry.score)));
        const profile = profiles.get(entry.movie_id);
        if (profile) item.append(renderProfileBars(profile));
        list.append(item);
    }
    wrap.append(list);
    return wrap;
}

export interface FeedbackCallbacks {
    onSubmit: (agreement: number, confidence: number) => void;
}

function sliderRow(idBase: string, label: string): { row: HTMLElement; input: HTMLInputElement; value: HTMLElement } {
    const row = el("div", "slider-row");
    const labelNode = el("label", "slider-label", label);
    labelNode.htmlFor = `${idBase}-slider`;
    const input = el("input", "score-slider");
    input.type = "range";
    input.id = `${idBase}-slider`;
    input.min = "0";
    input.max = "10";
    input.step = "0.1";
    input.value = "5";
    const value = el("output", "slider-value", "5");
    input.addEventListener("input", () => { value.textContent = input.value; });
    row.append(labelNode, input, value);
    return { row, input, value };
}

export function renderFeedbackPanel(state: RoomState, callbacks: FeedbackCallbacks): HTMLElement {
    const wrap = el("section", "feedback-panel");
    wrap.append(el("h2", undefined, "Your feedback"));
    const agreement = sliderRow("agreement", "Agreement (0-10)");
    const confidence = sliderRow("confidence", "Confidence (0-10)");
    const submit = el("button", "submit-feedback", "Submit feedback");
    const enabled = feedbackEnabled(state);
    agreement.input.disabled = !enabled;
    confidence.input.disabled = !enabled;
    submit.disabled = !enabled;
    const hint = feedbackHint(state);
    if (hint) wrap.append(el("p", "feedback-hint", hint));
    submit.addEventListener("click", () => {
        callbacks.onSubmit(Number(agreement.input.value), Number(confidence.input.value));
    });
    wrap.append(agreement.row, confidence.row, submit);
    return wrap;
}

export function renderConsensusPanel(
    consensus: ConsensusBody,
    participantNames: Map<string, string>,
): HTMLElement {
    const wrap = el("section", "consensus-panel");
    wrap.append(el("h2", undefined, consensus.partial ? "Consensus (live, partial)" : "Consensus"));

    const table = el("table", "feedback-values");
    for (const [participant, value] of Object.entries(consensus.participants)) {
        const row = el("tr");
        row.append(el("td", "participant-name", participantNames.get(participant) ?? participant));
        row.append(el("td", "participant-feedback", String(value)));
        table.append(row);
    }
    wrap.append(table);

    const stats = el("dl", "consensus-stats");
    stats.append(el("dt", undefined, "IQR"));
    stats.append(el("dd", "consensus-iqr", String(consensus.iqr)));
    stats.append(el("dt", undefined, "Mean"));
    stats.append(el("dd", "consensus-mean", String(consensus.mean)));
    wrap.append(stats);

    const badge = el("span", `level-badge level-${consensus.level.toLowerCase()}`, consensus.level);
    wrap.append(badge);

    if (!consensus.partial) {
        const banner = el("div",
            consensus.verdict === "Accepted" ? "verdict-banner accepted" : "verdict-banner re-evaluate",
            consensus.verdict);
        wrap.append(banner);
    }
    return wrap;
}

export function renderError(error: unknown): HTMLElement {
    const box = el("div", "error-box");
    if (error instanceof ApiError) {
        box.append(el("p", "error-detail",
            typeof error.detail === "string" ? error.detail : error.message));
        for (const field of error.fields()) {
            box.dataset[`field${field}`] = "1";
            const slider = document.getElementById(`${field}-slider`);
            slider?.classList.add("field-error");
        }
    } else {
        box.append(el("p", "error-detail", error instanceof Error ? error.message : String(error)));
    }
    return box;
}

export function renderSessionHeader(session: SessionView | null): HTMLElement {
    const header = el("header", "session-header");
    if (!session) {
        header.append(el("span", "session-state", "No session"));
        return header;
    }
    header.append(el("span", "session-id", session.id));
    header.append(el("span", `session-state state-${session.state.toLowerCase()}`, session.state));
    header.append(el("span", "session-progress",
        `${session.feedback_submitted.length}/${session.participants.length} feedback in`));
    return header;
}
