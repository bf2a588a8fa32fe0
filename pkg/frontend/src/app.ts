// Application shell: hash routing, the header name-search box, and the
// access-token field. Reloading any route rebuilds the view purely from
// API responses.

import { ApiClient } from './api';
import { mountArticlePage } from './article';
import { mountGraphView } from './graphview';
import { mountNameSearch, mountTheoremSearch } from './search';

export function startApp(root: HTMLElement, api: ApiClient = new ApiClient()): void {
  root.innerHTML = `
    <header class="app-header">
      <nav>
        <a href="#/articles">Articles</a>
        <a href="#/search">Theorem search</a>
        <a href="#/graph">Dependency graph</a>
      </nav>
      <div class="header-search"></div>
      <input class="token-input" type="password" placeholder="access token">
    </header>
    <main class="app-main"></main>
  `;
  const main = root.querySelector<HTMLElement>('.app-main')!;
  const tokenInput = root.querySelector<HTMLInputElement>('.token-input')!;

  const storedToken = localStorage.getItem('formalib-token');
  if (storedToken) {
    api.setToken(storedToken);
    tokenInput.value = storedToken;
  }
  tokenInput.addEventListener('change', () => {
    const token = tokenInput.value.trim() || null;
    api.setToken(token);
    if (token) localStorage.setItem('formalib-token', token);
    else localStorage.removeItem('formalib-token');
  });

  mountNameSearch(
    root.querySelector<HTMLElement>('.header-search')!,
    api,
    (target, kind) => {
      const article = kind === 'article' ? target : target.split(':')[0];
      location.hash = `#/article/${article}`;
    },
  );

  async function route(): Promise<void> {
    const hash = location.hash || '#/articles';
    main.innerHTML = '';
    const [, view, arg] = hash.split('/');
    if (view === 'article' && arg) {
      const page = mountArticlePage(main, api, decodeURIComponent(arg));
      await page.load();
    } else if (view === 'search') {
      mountTheoremSearch(main, api, (anchor) => {
        location.hash = `#/article/${anchor.split(':')[0]}`;
      });
    } else if (view === 'graph') {
      const graph = mountGraphView(main, api, (name) => {
        location.hash = `#/article/${name}`;
      });
      await graph.render();
    } else {
      const { articles } = await api.listArticles();
      const list = document.createElement('ul');
      list.className = 'article-list';
      for (const name of articles) {
        const item = document.createElement('li');
        const link = document.createElement('a');
        link.href = `#/article/${name}`;
        link.textContent = name;
        item.appendChild(link);
        list.appendChild(item);
      }
      main.appendChild(list);
    }
  }

  window.addEventListener('hashchange', () => void route());
  void route();
}
