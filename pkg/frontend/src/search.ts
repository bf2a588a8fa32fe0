// Search surfaces: the incremental name/symbol box (debounced per
// keystroke) and the theorem search page with "good" feedback buttons.

import type { ApiClient } from './api';
import { debounce } from './debounce';

export interface NameSearchHandle {
  root: HTMLElement;
  query(text: string): Promise<void>;
}

export function mountNameSearch(
  container: HTMLElement,
  api: ApiClient,
  onPick: (target: string, kind: string) => void,
): NameSearchHandle {
  const root = document.createElement('div');
  root.className = 'name-search';
  root.innerHTML = `
    <input class="name-search-input" type="search"
      placeholder="article or symbol..." autocomplete="off">
    <select class="name-search-kind">
      <option value="">all</option>
      <option value="article">articles</option>
      <option value="symbol">symbols</option>
    </select>
    <ul class="name-search-results"></ul>
  `;
  container.appendChild(root);

  const input = root.querySelector<HTMLInputElement>('.name-search-input')!;
  const kindSelect = root.querySelector<HTMLSelectElement>('.name-search-kind')!;
  const list = root.querySelector<HTMLUListElement>('.name-search-results')!;
  let generation = 0;

  async function query(text: string): Promise<void> {
    const ticket = ++generation;
    if (!text) {
      list.innerHTML = '';
      return;
    }
    const kind = (kindSelect.value || undefined) as 'article' | 'symbol' | undefined;
    const { results } = await api.searchNames(text, kind);
    if (ticket !== generation) return; // a newer query is in flight
    list.innerHTML = '';
    for (const result of results) {
      const item = document.createElement('li');
      item.className = `name-result name-result-${result.kind}`;
      item.dataset.key = result.key;
      item.dataset.target = result.target;
      item.textContent = `${result.key} (${result.kind})`;
      item.addEventListener('click', () => onPick(result.target, result.kind));
      list.appendChild(item);
    }
  }

  const debounced = debounce((text: string) => void query(text), 120);
  input.addEventListener('input', () => debounced(input.value));
  kindSelect.addEventListener('change', () => void query(input.value));

  return { root, query };
}

export interface TheoremSearchHandle {
  root: HTMLElement;
  search(text: string): Promise<void>;
}

export function mountTheoremSearch(
  container: HTMLElement,
  api: ApiClient,
  onOpen: (anchor: string) => void,
): TheoremSearchHandle {
  const root = document.createElement('section');
  root.className = 'theorem-search';
  root.innerHTML = `
    <p>Paste a statement in the formal language; no query syntax needed.</p>
    <form class="theorem-search-form">
      <input class="theorem-search-input" type="search"
        placeholder="ex x st x in A & ..." autocomplete="off">
      <button type="submit">Search</button>
    </form>
    <p class="theorem-search-message"></p>
    <ol class="theorem-search-results"></ol>
  `;
  container.appendChild(root);

  const form = root.querySelector<HTMLFormElement>('.theorem-search-form')!;
  const input = root.querySelector<HTMLInputElement>('.theorem-search-input')!;
  const message = root.querySelector<HTMLElement>('.theorem-search-message')!;
  const list = root.querySelector<HTMLOListElement>('.theorem-search-results')!;

  async function search(text: string): Promise<void> {
    const { results } = await api.searchTheorems(text);
    list.innerHTML = '';
    message.textContent = results.length
      ? ''
      : 'No results; the query may contain only structural words.';
    for (const result of results) {
      const item = document.createElement('li');
      item.className = 'theorem-result';
      item.dataset.anchor = result.anchor;

      const link = document.createElement('a');
      link.className = 'theorem-result-anchor';
      link.href = `#/article/${result.anchor.split(':')[0]}`;
      link.textContent = result.anchor;
      link.addEventListener('click', () => onOpen(result.anchor));

      const snippet = document.createElement('pre');
      snippet.className = 'theorem-result-statement';
      snippet.textContent = result.statement;

      const score = document.createElement('span');
      score.className = 'theorem-result-score';
      score.textContent = result.score.toFixed(3);

      const good = document.createElement('button');
      good.className = 'good-button';
      good.textContent = 'good';
      good.title = 'Mark this result as relevant';
      good.addEventListener('click', async () => {
        await api.sendFeedback(text, result.anchor);
        good.disabled = true;
        good.textContent = 'thanks!';
      });

      item.append(link, ' ', score, ' ', good, snippet);
      list.appendChild(item);
    }
  }

  form.addEventListener('submit', (event) => {
    event.preventDefault();
    void search(input.value);
  });

  return { root, search };
}
