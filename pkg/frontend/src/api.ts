// Thin typed client over the documented service API. The UI holds no
// authoritative state: everything it shows comes from these calls.

import type {
  ArticleView,
  CommentRevision,
  Graph,
  NameResult,
  TheoremResult,
} from './types';

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(private base: string = '', private token: string | null = null) {}

  setToken(token: string | null): void {
    this.token = token;
  }

  private async request<T>(path: string, init: RequestInit = {}): Promise<T> {
    const headers: Record<string, string> = {
      ...(init.headers as Record<string, string> | undefined),
    };
    if (init.body) headers['Content-Type'] = 'application/json';
    if (this.token) headers['Authorization'] = `Bearer ${this.token}`;
    const response = await fetch(this.base + path, { ...init, headers });
    if (!response.ok) {
      let detail = response.statusText;
      try {
        detail = (await response.json()).detail ?? detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  listArticles(): Promise<{ articles: string[] }> {
    return this.request('/api/articles');
  }

  getArticle(name: string): Promise<ArticleView> {
    return this.request(`/api/articles/${encodeURIComponent(name)}`);
  }

  searchNames(q: string, kind?: 'article' | 'symbol', limit = 20): Promise<{ results: NameResult[] }> {
    const params = new URLSearchParams({ q, limit: String(limit) });
    if (kind) params.set('kind', kind);
    return this.request(`/api/search/names?${params}`);
  }

  searchTheorems(query: string, limit = 20): Promise<{ results: TheoremResult[] }> {
    return this.request('/api/search/theorems', {
      method: 'POST',
      body: JSON.stringify({ query, limit }),
    });
  }

  sendFeedback(query: string, anchor: string): Promise<unknown> {
    return this.request('/api/feedback', {
      method: 'POST',
      body: JSON.stringify({ query, anchor }),
    });
  }

  latestComment(anchor: string): Promise<{ revision: CommentRevision | null }> {
    return this.request(`/api/comments/${encodeURIComponent(anchor)}`);
  }

  commentHistory(anchor: string): Promise<{ revisions: CommentRevision[] }> {
    return this.request(`/api/comments/${encodeURIComponent(anchor)}/history`);
  }

  saveComment(anchor: string, body: string): Promise<CommentRevision> {
    return this.request(`/api/comments/${encodeURIComponent(anchor)}`, {
      method: 'POST',
      body: JSON.stringify({ body }),
    });
  }

  rollbackComment(anchor: string, to: number): Promise<CommentRevision> {
    return this.request(`/api/comments/${encodeURIComponent(anchor)}/rollback`, {
      method: 'POST',
      body: JSON.stringify({ to }),
    });
  }

  getGraph(reduced: boolean): Promise<Graph> {
    return this.request(`/api/graph?reduced=${reduced}`);
  }

  getNeighborhood(node: string, radius: number, reduced: boolean): Promise<Graph> {
    const params = new URLSearchParams({
      node,
      radius: String(radius),
      reduced: String(reduced),
    });
    return this.request(`/api/graph/neighborhood?${params}`);
  }
}
