import { defineConfig } from 'vitest/config';

export default defineConfig({
  server: {
    proxy: {
      '/api': 'http://127.0.0.1:8080',
    },
  },
  test: {
    environment: 'happy-dom',
    testTimeout: 30000,
    hookTimeout: 120000,
    fileParallelism: false,
  },
});
