import { defineConfig } from "vitest/config";

export default defineConfig({
    server: {
        proxy: {
            // Dev convenience: same-origin /v1 calls hit a locally running service.
            "/v1": "http://127.0.0.1:8000",
        },
    },
    test: {
        environment: "happy-dom",
    },
});
