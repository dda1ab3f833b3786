import { defineConfig } from "vitest/config";

export default defineConfig({
  test: {
    globals: true,
    environment: "jsdom",
    include: ["tests/**/*.test.ts"],
    globalSetup: ["tests/setup/service.ts"],
    testTimeout: 30_000,
    hookTimeout: 120_000,
  },
});
