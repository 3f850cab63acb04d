// Entry point: wires the room state, the /v1 client and the DOM together.

import {
    EmotionProfile,
    addParticipant,
    createSession,
    getSession,
    listMovies,
    movieEmotions,
    requestRecommendation,
    submitFeedback,
} from "./api";
import { RoomState, clampScore, favoriteEditable, initialState, startPolling } from "./state";
import {
    renderCatalog,
    renderConsensusPanel,
    renderError,
    renderFeedbackPanel,
    renderRanking,
    renderSessionHeader,
} from "./ui";

let state: RoomState = initialState();
const profiles = new Map<string, EmotionProfile>();
let catalogQuery = "";

function titles(): Map<string, string> {
    return new Map(state.movies.map(m => [m.id, m.title]));
}

function participantNames(): Map<string, string> {
    return new Map((state.session?.participants ?? []).map(p => [p.id, p.name || p.id]));
}

async function ensureProfiles(movieIds: string[]) {
    for (const id of movieIds) {
        if (!profiles.has(id)) {
            try {
                const body = await movieEmotions(id);
                profiles.set(id, body.profile);
            } catch {
                // Missing channel data: show the entry without bars.
            }
        }
    }
}

function apply(next: RoomState) {
    state = next;
    render();
}

async function onCreateSession() {
    try {
        const session = await createSession(state.movies.map(m => m.id));
        apply({ ...state, sessionId: session.id, consensus: null, lastError: null });
        apply(await refreshSession());
    } catch (err) {
        showError(err);
    }
}

async function onJoinSession(sessionId: string) {
    try {
        await getSession(sessionId);
        apply({ ...state, sessionId, consensus: null, lastError: null });
        apply(await refreshSession());
    } catch (err) {
        showError(err);
    }
}

async function refreshSession(): Promise<RoomState> {
    if (!state.sessionId) return state;
    return { ...state, session: await getSession(state.sessionId) };
}

async function onPickFavorite(movieId: string) {
    if (!state.sessionId) return;
    const nameInput = document.querySelector<HTMLInputElement>("#participant-name");
    const name = nameInput?.value.trim() || "viewer";
    const participantId = state.participantId ?? name.toLowerCase().replace(/\s+/g, "-");
    try {
        const view = await addParticipant(state.sessionId, participantId, name, movieId);
        apply({ ...state, participantId, session: view, lastError: null });
    } catch (err) {
        showError(err);
    }
}

async function onRecommend() {
    if (!state.sessionId) return;
    try {
        await requestRecommendation(state.sessionId);
        apply({ ...(await refreshSession()), consensus: null });
    } catch (err) {
        showError(err);
    }
}

async function onSubmitFeedback(agreement: number, confidence: number) {
    if (!state.sessionId || !state.participantId) return;
    try {
        await submitFeedback(
            state.sessionId, state.participantId,
            clampScore(agreement), clampScore(confidence),
        );
        apply(await refreshSession());
    } catch (err) {
        showError(err);
    }
}

function showError(error: unknown) {
    const root = document.getElementById("errors");
    if (root) {
        root.replaceChildren(renderError(error));
    }
}

export function render() {
    const root = document.getElementById("app");
    if (!root) return;
    root.replaceChildren();
    root.append(renderSessionHeader(state.session));

    const errors = document.createElement("div");
    errors.id = "errors";
    root.append(errors);

    if (!state.sessionId) {
        const setup = document.createElement("section");
        setup.className = "setup";
        const createButton = document.createElement("button");
        createButton.id = "create-session";
        createButton.textContent = "Create session";
        createButton.addEventListener("click", onCreateSession);
        const joinInput = document.createElement("input");
        joinInput.id = "join-id";
        joinInput.placeholder = "session id";
        const joinButton = document.createElement("button");
        joinButton.id = "join-session";
        joinButton.textContent = "Join";
        joinButton.addEventListener("click", () => onJoinSession(joinInput.value.trim()));
        setup.append(createButton, joinInput, joinButton);
        root.append(setup);
        return;
    }

    if (favoriteEditable(state)) {
        const picker = document.createElement("section");
        picker.className = "favorite-picker";
        const nameInput = document.createElement("input");
        nameInput.id = "participant-name";
        nameInput.placeholder = "your name";
        const search = document.createElement("input");
        search.id = "catalog-search";
        search.placeholder = "search title or genre";
        search.value = catalogQuery;
        search.addEventListener("input", () => {
            catalogQuery = search.value;
            render();
            document.getElementById("catalog-search")?.focus();
        });
        picker.append(nameInput, search, renderCatalog(state.movies, catalogQuery, onPickFavorite, profiles));
        root.append(picker);

        const recommendButton = document.createElement("button");
        recommendButton.id = "run-recommend";
        recommendButton.textContent = "Request recommendation";
        recommendButton.disabled = (state.session?.participants.length ?? 0) === 0;
        recommendButton.addEventListener("click", onRecommend);
        root.append(recommendButton);
    }

    const ranking = state.session?.recommendation?.ranking;
    if (ranking && state.session?.state !== "Gathering") {
        void ensureProfiles(ranking.map(r => r.movie_id));
        root.append(renderRanking(ranking, titles(), profiles));
    }

    root.append(renderFeedbackPanel(state, { onSubmit: onSubmitFeedback }));

    if (state.consensus) {
        root.append(renderConsensusPanel(state.consensus, participantNames()));
    }
}

async function bootstrap() {
    try {
        const body = await listMovies();
        state = { ...state, movies: body.movies };
    } catch (err) {
        showError(err);
    }
    render();
    startPolling(() => state, apply);
}

if (typeof document !== "undefined" && document.getElementById("app")) {
    void bootstrap();
}
