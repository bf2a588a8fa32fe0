// Wire types for the platform API.

export interface NameResult {
  key: string;
  kind: 'article' | 'symbol';
  target: string;
}

export interface TheoremResult {
  anchor: string;
  score: number;
  statement: string;
}

export interface CommentRevision {
  anchor: string;
  revision_id: number;
  parent: number | null;
  author: string;
  timestamp: string;
  deleted: boolean;
  body: string;
}

export interface ArticleItem {
  anchor: string;
  kind: string;
  label: string;
  span: [number, number];
  statement: string;
}

export interface ArticleView {
  name: string;
  version_label: string;
  frozen: boolean;
  document: string;
  items: ArticleItem[];
  comments: Record<string, { revision_id: number; author: string; timestamp: string }>;
}

export interface GraphNode {
  id: string;
  layer: number | null;
}

export interface GraphEdge {
  from: string;
  to: string;
}

export interface Graph {
  nodes: GraphNode[];
  edges: GraphEdge[];
}
