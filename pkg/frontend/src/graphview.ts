// Dependency graph explorer. The server supplies layer values (longest
// path to a sink); vertical placement follows them directly and the client
// only decides horizontal ordering (a couple of barycenter sweeps). The
// reduced graph is shown by default since that is the readable one; the
// full relation is a toggle away.

import type { ApiClient } from './api';
import type { Graph } from './types';

const SVG_NS = 'http://www.w3.org/2000/svg';
const ROW_GAP = 90;
const COL_GAP = 130;
const MARGIN = 60;

interface Placed {
  id: string;
  layer: number;
  x: number;
  y: number;
}

export function layoutByLayers(graph: Graph): Map<string, Placed> {
  const layers = new Map<number, string[]>();
  for (const node of graph.nodes) {
    const layer = node.layer ?? 0;
    if (!layers.has(layer)) layers.set(layer, []);
    layers.get(layer)!.push(node.id);
  }
  const maxLayer = Math.max(0, ...layers.keys());
  const placed = new Map<string, Placed>();
  for (const [layer, ids] of layers) {
    ids.sort();
    ids.forEach((id, i) => {
      placed.set(id, {
        id,
        layer,
        x: MARGIN + i * COL_GAP,
        y: MARGIN + (maxLayer - layer) * ROW_GAP,
      });
    });
  }
  // Two barycenter sweeps settle most crossings without a full solver.
  const neighbors = new Map<string, string[]>();
  for (const { from, to } of graph.edges) {
    (neighbors.get(from) ?? neighbors.set(from, []).get(from)!).push(to);
    (neighbors.get(to) ?? neighbors.set(to, []).get(to)!).push(from);
  }
  for (let sweep = 0; sweep < 2; sweep++) {
    for (const [layer, ids] of layers) {
      const score = (id: string) => {
        const near = (neighbors.get(id) ?? [])
          .map((n) => placed.get(n)!.x)
          .filter((x) => x !== undefined);
        return near.length
          ? near.reduce((a, b) => a + b, 0) / near.length
          : placed.get(id)!.x;
      };
      const ordered = [...ids].sort(
        (a, b) => score(a) - score(b) || a.localeCompare(b),
      );
      ordered.forEach((id, i) => {
        placed.get(id)!.x = MARGIN + i * COL_GAP;
      });
      layers.set(layer, ordered);
    }
  }
  return placed;
}

export interface GraphViewHandle {
  root: HTMLElement;
  render(): Promise<void>;
  highlightNeighborhood(id: string): Promise<void>;
  focusNode(query: string): string | null;
  readonly reduced: boolean;
  readonly scale: number;
}

export function mountGraphView(
  container: HTMLElement,
  api: ApiClient,
  onOpenArticle: (name: string) => void,
): GraphViewHandle {
  const root = document.createElement('section');
  root.className = 'graph-view';
  root.innerHTML = `
    <div class="graph-toolbar">
      <label class="graph-reduced-label">
        <input type="checkbox" class="graph-reduced" checked> transitive reduction
      </label>
      <input class="graph-node-search" type="search" placeholder="find node...">
      <button class="graph-help-button" title="Help">?</button>
    </div>
    <div class="graph-help" hidden>
      <h4>Controls</h4>
      <ul>
        <li>click a node: highlight its direct neighborhood</li>
        <li>double-click a node: open the article</li>
        <li>drag a node: move it; drag the background: pan</li>
        <li>mouse wheel: zoom</li>
        <li>search box: center the view on a node</li>
        <li>checkbox: toggle between reduced and full graph</li>
      </ul>
    </div>
    <svg class="graph-svg" width="1200" height="800">
      <g class="graph-pan"></g>
    </svg>
  `;
  container.appendChild(root);

  const svg = root.querySelector<SVGSVGElement>('.graph-svg')!;
  const pan = root.querySelector<SVGGElement>('.graph-pan')!;
  const reducedBox = root.querySelector<HTMLInputElement>('.graph-reduced')!;
  const searchBox = root.querySelector<HTMLInputElement>('.graph-node-search')!;
  const helpButton = root.querySelector<HTMLButtonElement>('.graph-help-button')!;
  const helpPanel = root.querySelector<HTMLElement>('.graph-help')!;

  let placed = new Map<string, Placed>();
  let edges: Graph['edges'] = [];
  const view = { scale: 1, tx: 0, ty: 0 };

  const applyView = () => {
    pan.setAttribute(
      'transform',
      `translate(${view.tx} ${view.ty}) scale(${view.scale})`,
    );
  };

  function edgeElements(): SVGLineElement[] {
    return [...pan.querySelectorAll<SVGLineElement>('.graph-edge')];
  }

  function nodeElements(): SVGGElement[] {
    return [...pan.querySelectorAll<SVGGElement>('.graph-node')];
  }

  function positionEdge(line: SVGLineElement): void {
    const from = placed.get(line.dataset.from!)!;
    const to = placed.get(line.dataset.to!)!;
    line.setAttribute('x1', String(from.x));
    line.setAttribute('y1', String(from.y));
    line.setAttribute('x2', String(to.x));
    line.setAttribute('y2', String(to.y));
  }

  function draw(graph: Graph): void {
    placed = layoutByLayers(graph);
    edges = graph.edges;
    pan.innerHTML = '';
    for (const edge of graph.edges) {
      const line = document.createElementNS(SVG_NS, 'line');
      line.setAttribute('class', 'graph-edge');
      line.dataset.from = edge.from;
      line.dataset.to = edge.to;
      positionEdge(line);
      pan.appendChild(line);
    }
    for (const node of placed.values()) {
      const group = document.createElementNS(SVG_NS, 'g');
      group.setAttribute('class', 'graph-node');
      group.dataset.id = node.id;
      group.setAttribute('transform', `translate(${node.x} ${node.y})`);

      const circle = document.createElementNS(SVG_NS, 'circle');
      circle.setAttribute('r', '18');
      const label = document.createElementNS(SVG_NS, 'text');
      label.textContent = node.id;
      label.setAttribute('dy', '32');
      group.append(circle, label);

      group.addEventListener('click', () => void highlightNeighborhood(node.id));
      group.addEventListener('dblclick', () => onOpenArticle(node.id));
      group.addEventListener('mousedown', (event) => beginNodeDrag(event, node.id));
      pan.appendChild(group);
    }
    applyView();
  }

  async function render(): Promise<void> {
    draw(await api.getGraph(reducedBox.checked));
  }

  async function highlightNeighborhood(id: string): Promise<void> {
    const sub = await api.getNeighborhood(id, 1, reducedBox.checked);
    const kept = new Set(sub.nodes.map((n) => n.id));
    for (const group of nodeElements()) {
      const inside = kept.has(group.dataset.id!);
      group.classList.toggle('highlighted', inside);
      group.classList.toggle('dimmed', !inside);
      group.classList.toggle('center', group.dataset.id === id);
    }
    for (const line of edgeElements()) {
      const inside = kept.has(line.dataset.from!) && kept.has(line.dataset.to!);
      line.classList.toggle('highlighted', inside);
      line.classList.toggle('dimmed', !inside);
    }
  }

  function focusNode(query: string): string | null {
    const q = query.toLowerCase();
    if (!q) return null;
    const ids = [...placed.keys()].sort();
    const hit =
      ids.find((id) => id.toLowerCase() === q) ??
      ids.find((id) => id.toLowerCase().startsWith(q)) ??
      ids.find((id) => id.toLowerCase().includes(q));
    if (!hit) return null;
    const node = placed.get(hit)!;
    const width = Number(svg.getAttribute('width') ?? 1200);
    const height = Number(svg.getAttribute('height') ?? 800);
    view.tx = width / 2 - node.x * view.scale;
    view.ty = height / 2 - node.y * view.scale;
    applyView();
    for (const group of nodeElements()) {
      group.classList.toggle('focus', group.dataset.id === hit);
    }
    return hit;
  }

  // -- interactions -------------------------------------------------------

  let drag:
    | { kind: 'node'; id: string; startX: number; startY: number }
    | { kind: 'pan'; startX: number; startY: number }
    | null = null;

  function beginNodeDrag(event: MouseEvent, id: string): void {
    event.stopPropagation();
    drag = { kind: 'node', id, startX: event.clientX, startY: event.clientY };
  }

  svg.addEventListener('mousedown', (event) => {
    drag = { kind: 'pan', startX: event.clientX, startY: event.clientY };
  });

  svg.addEventListener('mousemove', (event) => {
    if (!drag) return;
    const dx = event.clientX - drag.startX;
    const dy = event.clientY - drag.startY;
    drag.startX = event.clientX;
    drag.startY = event.clientY;
    if (drag.kind === 'pan') {
      view.tx += dx;
      view.ty += dy;
      applyView();
      return;
    }
    const moving = drag;
    const node = placed.get(moving.id)!;
    node.x += dx / view.scale;
    node.y += dy / view.scale;
    const group = nodeElements().find((g) => g.dataset.id === moving.id);
    group?.setAttribute('transform', `translate(${node.x} ${node.y})`);
    for (const line of edgeElements()) {
      if (line.dataset.from === moving.id || line.dataset.to === moving.id) {
        positionEdge(line);
      }
    }
  });

  svg.addEventListener('mouseup', () => {
    drag = null;
  });

  svg.addEventListener('wheel', (event) => {
    event.preventDefault();
    const factor = Math.exp(-event.deltaY / 400);
    const next = Math.min(4, Math.max(0.2, view.scale * factor));
    // keep the pointer position fixed while zooming
    const px = event.clientX;
    const py = event.clientY;
    view.tx = px - ((px - view.tx) / view.scale) * next;
    view.ty = py - ((py - view.ty) / view.scale) * next;
    view.scale = next;
    applyView();
  });

  reducedBox.addEventListener('change', () => void render());
  searchBox.addEventListener('change', () => focusNode(searchBox.value));
  helpButton.addEventListener('click', () => {
    helpPanel.hidden = !helpPanel.hidden;
  });

  return {
    root,
    render,
    highlightNeighborhood,
    focusNode,
    get reduced() {
      return reducedBox.checked;
    },
    get scale() {
      return view.scale;
    },
  };
}
