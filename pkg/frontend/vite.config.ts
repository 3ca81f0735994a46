import { defineConfig } from "vite";

// forward API calls to the model service (lexsub serve --port 8123)
const proxy = {
  "/api": {
    target: "http://127.0.0.1:8123",
    changeOrigin: true,
  },
};

export default defineConfig({
  server: { port: 5173, proxy },
  preview: { port: 5173, proxy },
});
