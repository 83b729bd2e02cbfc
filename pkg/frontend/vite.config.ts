import { defineConfig } from "vite";

// The UI is served by Vite in development; all numerical work happens in
// the local fitting service, so /v1/* is proxied to it.
export default defineConfig({
  server: {
    proxy: { "/v1": "http://127.0.0.1:8377" },
  },
  test: {
    environment: "node",
  },
});
