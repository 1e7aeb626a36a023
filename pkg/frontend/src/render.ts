/**
 * HTML renderers for the consultation console.
 *
 * Every function here is a pure string builder over service payloads,
 * so the view layer can be exercised in tests without a DOM. Numbers
 * are always shown to three decimals, straight from the wire; nothing
 * is recomputed on the client.
 */

import type {
  DeltaRow,
  DiagnosisRow,
  EntryProblem,
  EvidenceEntry,
  ExplanationNode,
  FrameInfo,
  Interval,
  ObservationNode,
} from "./model.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;")
    .replace(/'/g, "&#39;");
}

export function fmt(value: number): string {
  return value.toFixed(3);
}

/** Signed three-decimal form used by delta badges. */
export function fmtDelta(value: number): string {
  const body = Math.abs(value).toFixed(3);
  return value < -5e-4 ? `-${body}` : value > 5e-4 ? `+${body}` : "0.000";
}

/**
 * The belief interval as a bar: a solid segment out to bel, then a
 * hatched extension covering pl - bel.
 */
export function intervalBar(interval: Interval): string {
  const bel = Math.max(0, Math.min(1, interval.bel));
  const pl = Math.max(bel, Math.min(1, interval.pl));
  const solid = (bel * 100).toFixed(1);
  const hatched = ((pl - bel) * 100).toFixed(1);
  return (
    `<span class="bar">` +
    `<span class="bar-bel" style="width:${solid}%"></span>` +
    `<span class="bar-pl" style="width:${hatched}%"></span>` +
    `</span>` +
    `<span class="bar-label">[${fmt(interval.bel)}, ${fmt(interval.pl)}]</span>`
  );
}

export function renderDiagnoses(rows: DiagnosisRow[]): string {
  if (rows.length === 0) {
    return `<p class="empty">No diagnoses yet. Enter evidence to begin.</p>`;
  }
  const items = rows.map(
    (row) =>
      `<li class="diagnosis" data-hypothesis="${escapeHtml(row.hypothesis)}">` +
      `<button class="explain" data-action="explain" ` +
      `data-hypothesis="${escapeHtml(row.hypothesis)}">why</button>` +
      `<span class="diagnosis-text">${escapeHtml(row.text)}</span>` +
      intervalBar(row.interval) +
      `</li>`,
  );
  return `<ol class="diagnoses">${items.join("")}</ol>`;
}

function renderObservation(obs: ObservationNode): string {
  const degree =
    obs.degree === null
      ? ""
      : `<span class="obs-degree">${fmt(obs.degree)}</span>`;
  const children =
    obs.children.length === 0
      ? ""
      : `<ul class="obs-children">` +
        obs.children.map(renderObservation).join("") +
        `</ul>`;
  return (
    `<li class="observation">` +
    `<span class="obs-text">${escapeHtml(obs.text)}</span>${degree}${children}` +
    `</li>`
  );
}

function renderNode(node: ExplanationNode, isLast: boolean): string {
  const contributions =
    node.contributions.length === 0
      ? `<p class="no-contributions">no recorded rule contributions</p>`
      : `<ol class="contributions">` +
        node.contributions
          .map(
            (c) =>
              `<li class="contribution">` +
              `<span class="rule-id">${escapeHtml(c.rule)}</span> ` +
              `<span class="rule-effect">${escapeHtml(c.effect)}</span> ` +
              `<span class="rule-clause">(${escapeHtml(c.clause)} side, ` +
              `degree ${fmt(c.inferred_degree)})</span>` +
              `<ul class="observations">` +
              c.observations.map(renderObservation).join("") +
              `</ul>` +
              `</li>`,
          )
          .join("") +
        `</ol>`;

  let parentItem = "";
  if (isLast) {
    if (node.parent === null) {
      parentItem =
        `<p class="parent-item">` +
        `<button class="expand" data-action="expand" disabled>` +
        `no broader hypothesis</button></p>`;
    } else {
      parentItem =
        `<p class="parent-item">` +
        `<span class="parent-text">member of ` +
        `${escapeHtml(node.parent.text)}</span>` +
        intervalBar(node.parent.interval) +
        `<button class="expand" data-action="expand" ` +
        `data-hypothesis="${escapeHtml(node.parent.hypothesis)}">` +
        `Explain ${escapeHtml(node.parent.text)}</button></p>`;
    }
  }

  return (
    `<section class="node" data-hypothesis="${escapeHtml(node.hypothesis)}">` +
    `<h3>${escapeHtml(node.text)}</h3>` +
    intervalBar(node.interval) +
    contributions +
    parentItem +
    `</section>`
  );
}

export function renderExplanation(nodes: ExplanationNode[]): string {
  if (nodes.length === 0) {
    return `<p class="empty">Nothing to explain.</p>`;
  }
  return nodes.map((n, i) => renderNode(n, i === nodes.length - 1)).join("");
}

export function renderNotFound(hypothesis: string): string {
  return (
    `<p class="not-found">No hypothesis named ` +
    `<code>${escapeHtml(hypothesis)}</code> in this knowledge base.</p>`
  );
}

export function renderDeltas(deltas: DeltaRow[]): string {
  if (deltas.length === 0) {
    return `<p class="empty">No hypotheses declared.</p>`;
  }
  const rows = deltas.map((d) => {
    const belClass =
      d.bel_delta > 5e-4 ? "up" : d.bel_delta < -5e-4 ? "down" : "flat";
    const plClass =
      d.pl_delta > 5e-4 ? "up" : d.pl_delta < -5e-4 ? "down" : "flat";
    return (
      `<tr class="delta" data-hypothesis="${escapeHtml(d.hypothesis)}">` +
      `<td>${escapeHtml(d.text)}</td>` +
      `<td>[${fmt(d.before.bel)}, ${fmt(d.before.pl)}]</td>` +
      `<td>[${fmt(d.after.bel)}, ${fmt(d.after.pl)}]</td>` +
      `<td><span class="badge ${belClass}">${fmtDelta(d.bel_delta)}</span></td>` +
      `<td><span class="badge ${plClass}">${fmtDelta(d.pl_delta)}</span></td>` +
      `</tr>`
    );
  });
  return (
    `<table class="deltas">` +
    `<thead><tr><th>hypothesis</th><th>before</th><th>after</th>` +
    `<th>&Delta;bel</th><th>&Delta;pl</th></tr></thead>` +
    `<tbody>${rows.join("")}</tbody></table>` +
    `<p class="overlay-actions">` +
    `<button data-action="commit-whatif">Commit these entries</button>` +
    `<button data-action="discard-whatif">Discard</button></p>`
  );
}

export interface PanelEntry {
  element: string;
  degree: number;
}

/**
 * The evidence panel lists the observable frames: those the rules read
 * from rather than conclude into. Each row offers the frame's elements
 * and a degree input, plus any inline problem for that row.
 */
export function renderEvidencePanel(
  frames: FrameInfo[],
  chosen: ReadonlyMap<string, PanelEntry>,
  problems: ReadonlyMap<string, string>,
): string {
  const observable = frames.filter((f) => !f.inferred && !f.consultation);
  if (observable.length === 0) {
    return `<p class="empty">This knowledge base has no observable frames.</p>`;
  }
  const rows = observable.map((frame) => {
    const entry = chosen.get(frame.id);
    const options = [`<option value="">(not observed)</option>`]
      .concat(
        frame.elements.map((el) => {
          const selected = entry?.element === el ? " selected" : "";
          return `<option value="${escapeHtml(el)}"${selected}>` +
            `${escapeHtml(el)}</option>`;
        }),
      )
      .join("");
    const degree = entry === undefined ? 1 : entry.degree;
    const problem = problems.get(frame.id);
    const problemHtml =
      problem === undefined
        ? ""
        : `<span class="problem">${escapeHtml(problem)}</span>`;
    return (
      `<div class="evidence-row" data-frame="${escapeHtml(frame.id)}">` +
      `<label>${escapeHtml(frame.name)}</label>` +
      `<select data-role="element">${options}</select>` +
      `<input data-role="degree" type="number" min="0" max="1" step="0.05" ` +
      `value="${degree}">` +
      problemHtml +
      `</div>`
    );
  });
  return (
    rows.join("") +
    `<p class="panel-actions">` +
    `<button data-action="commit-evidence">Update diagnoses</button>` +
    `<button data-action="whatif">What if?</button></p>`
  );
}

/** Inline 422 problems, keyed back to the frame of the offending entry. */
export function problemsByFrame(
  problems: EntryProblem[],
  entries: EvidenceEntry[],
): Map<string, string> {
  const byFrame = new Map<string, string>();
  for (const problem of problems) {
    const entry = entries[problem.index];
    if (entry !== undefined) {
      byFrame.set(entry.frame, problem.error);
    }
  }
  return byFrame;
}
