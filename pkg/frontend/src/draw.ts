import type { HistoryPoint } from './types.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

function svgCanvas(width: number, height: number, testId: string): SVGSVGElement {
  const svg = svgEl('svg', {
    width,
    height,
    viewBox: `0 0 ${width} ${height}`,
  });
  svg.dataset.testid = testId;
  return svg;
}

/** Objective value per evaluation, with the running best overlaid. */
export function energyChart(history: HistoryPoint[]): SVGSVGElement {
  const width = 560;
  const height = 240;
  const pad = 36;
  const svg = svgCanvas(width, height, 'energy-chart');
  if (history.length === 0) return svg;

  const energies = history.map((h) => h.energy);
  const lo = Math.min(...energies);
  const hi = Math.max(...energies);
  const span = hi - lo || 1;
  const x = (k: number) =>
    pad + (k / Math.max(history.length - 1, 1)) * (width - 2 * pad);
  const y = (e: number) => height - pad - ((e - lo) / span) * (height - 2 * pad);

  const raw = history.map((h, k) => `${x(k)},${y(h.energy)}`).join(' ');
  svg.appendChild(svgEl('polyline', {
    points: raw, fill: 'none', stroke: '#9db4d0', 'stroke-width': 1,
  }));

  let best = Infinity;
  const incumbent = history
    .map((h, k) => {
      best = Math.min(best, h.energy);
      return `${x(k)},${y(best)}`;
    })
    .join(' ');
  svg.appendChild(svgEl('polyline', {
    points: incumbent, fill: 'none', stroke: '#1f4e8c', 'stroke-width': 2,
  }));

  svg.appendChild(svgEl('line', {
    x1: pad, y1: height - pad, x2: width - pad, y2: height - pad,
    stroke: '#444',
  }));
  svg.appendChild(svgEl('line', {
    x1: pad, y1: pad, x2: pad, y2: height - pad, stroke: '#444',
  }));
  const low = svgEl('text', { x: 4, y: y(lo) + 4, 'font-size': 11 });
  low.textContent = lo.toFixed(3);
  svg.appendChild(low);
  const high = svgEl('text', { x: 4, y: y(hi) + 4, 'font-size': 11 });
  high.textContent = hi.toFixed(3);
  svg.appendChild(high);
  return svg;
}

function circleLayout(n: number, cx: number, cy: number, r: number): [number, number][] {
  return Array.from({ length: n }, (_, k) => [
    cx + r * Math.cos((2 * Math.PI * k) / n),
    cy + r * Math.sin((2 * Math.PI * k) / n),
  ]);
}

function fitPoints(points: [number, number][], size: number, pad: number): [number, number][] {
  const xs = points.map((p) => p[0]);
  const ys = points.map((p) => p[1]);
  const loX = Math.min(...xs);
  const loY = Math.min(...ys);
  const spanX = Math.max(...xs) - loX || 1;
  const spanY = Math.max(...ys) - loY || 1;
  const scale = (size - 2 * pad) / Math.max(spanX, spanY);
  return points.map(([px, py]) => [
    pad + (px - loX) * scale,
    size - pad - (py - loY) * scale,
  ]);
}

/** Closed tour over city coordinates. */
export function tourFigure(coordinates: [number, number][], tour: number[]): SVGSVGElement {
  const size = 320;
  const svg = svgCanvas(size, size, 'tour-figure');
  const points = fitPoints(coordinates, size, 24);
  const closed = [...tour, tour[0]];
  svg.appendChild(svgEl('polyline', {
    points: closed.map((c) => points[c].join(',')).join(' '),
    fill: 'none', stroke: '#1f4e8c', 'stroke-width': 2,
  }));
  points.forEach(([px, py], city) => {
    svg.appendChild(svgEl('circle', { cx: px, cy: py, r: 6, fill: '#e3742d' }));
    const label = svgEl('text', { x: px + 8, y: py - 8, 'font-size': 12 });
    label.textContent = String(city);
    svg.appendChild(label);
  });
  return svg;
}

/** Two-colored nodes on a circle; crossing edges dashed. */
export function cutFigure(
  numNodes: number,
  edges: [number, number, number][],
  partition: number[],
): SVGSVGElement {
  const size = 320;
  const svg = svgCanvas(size, size, 'cut-figure');
  const points = circleLayout(numNodes, size / 2, size / 2, size / 2 - 28);
  for (const [u, v] of edges) {
    const crossing = partition[u] !== partition[v];
    svg.appendChild(svgEl('line', {
      x1: points[u][0], y1: points[u][1],
      x2: points[v][0], y2: points[v][1],
      stroke: crossing ? '#c0392b' : '#999',
      'stroke-width': crossing ? 2 : 1,
      ...(crossing ? { 'stroke-dasharray': '5,3' } : {}),
    }));
  }
  points.forEach(([px, py], node) => {
    svg.appendChild(svgEl('circle', {
      cx: px, cy: py, r: 10,
      fill: partition[node] === 0 ? '#1f4e8c' : '#e3742d',
    }));
    const label = svgEl('text', {
      x: px, y: py + 4, 'font-size': 11, 'text-anchor': 'middle', fill: '#fff',
    });
    label.textContent = String(node);
    svg.appendChild(label);
  });
  return svg;
}
