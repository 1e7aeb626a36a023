/**
 * Console state machine.
 *
 * Owns one service session (one per browser tab) and the view state
 * derived from it: the evidence panel, the ranked diagnosis list, the
 * explanation chain, and the what-if overlay. All numbers it displays
 * come from service responses; the only local check is that a typed
 * degree is a number in [0, 1], which gates the request entirely.
 */

import { ApiError, ConsultClient } from "./api.js";
import type {
  DiagnosisRow,
  EvidenceEntry,
  ExplanationNode,
  FrameInfo,
} from "./model.js";
import {
  renderDeltas,
  renderDiagnoses,
  renderEvidencePanel,
  renderExplanation,
  renderNotFound,
  problemsByFrame,
  type PanelEntry,
} from "./render.js";

/** Rendering surface; the app binds these to DOM regions. */
export interface View {
  evidence(html: string): void;
  diagnoses(html: string): void;
  drawer(html: string): void;
  overlay(html: string): void;
  toast(message: string): void;
}

interface OverlayState {
  entries: EvidenceEntry[];
  diagnoses: DiagnosisRow[];
}

export class ConsultationConsole {
  private readonly client: ConsultClient;
  private readonly view: View;
  private sessionId: string | null = null;
  private frames: FrameInfo[] = [];
  private panel = new Map<string, PanelEntry>();
  private problems = new Map<string, string>();
  private chain: ExplanationNode[] = [];
  private overlayState: OverlayState | null = null;

  constructor(client: ConsultClient, view: View) {
    this.client = client;
    this.view = view;
  }

  async start(): Promise<void> {
    const session = await this.client.createSession();
    this.sessionId = session.session_id;
    const payload = await this.client.getFrames();
    this.frames = payload.frames;
    this.renderPanel();
    const rows = await this.client.getDiagnoses(this.session);
    this.view.diagnoses(renderDiagnoses(rows));
  }

  get session(): string {
    if (this.sessionId === null) {
      throw new Error("console not started");
    }
    return this.sessionId;
  }

  /** The panel's current entries in frame order. */
  entries(): EvidenceEntry[] {
    const out: EvidenceEntry[] = [];
    for (const frame of this.frames) {
      const entry = this.panel.get(frame.id);
      if (entry !== undefined) {
        out.push({
          frame: frame.id,
          element: entry.element,
          degree: entry.degree,
        });
      }
    }
    return out;
  }

  /**
   * Record one panel edit. An unparseable or out-of-range degree is
   * rejected here, before any request could carry it.
   */
  setEntry(frameId: string, element: string, degreeText: string): boolean {
    if (element === "") {
      this.panel.delete(frameId);
      this.problems.delete(frameId);
      this.renderPanel();
      return true;
    }
    const degree = Number(degreeText);
    if (!Number.isFinite(degree) || degree < 0 || degree > 1) {
      this.problems.set(
        frameId,
        `degree must be a number between 0 and 1, got ${degreeText}`,
      );
      this.renderPanel();
      return false;
    }
    this.problems.delete(frameId);
    this.panel.set(frameId, { element, degree });
    this.renderPanel();
    return true;
  }

  /** Replace the session's evidence with the panel and re-rank. */
  async commitEvidence(): Promise<void> {
    const entries = this.entries();
    try {
      const rows = await this.client.putEvidence(this.session, entries);
      this.problems.clear();
      this.renderPanel();
      this.view.diagnoses(renderDiagnoses(rows));
    } catch (error) {
      if (error instanceof ApiError && error.status === 422) {
        this.problems = problemsByFrame(error.entryProblems(), entries);
        this.renderPanel();
        return;
      }
      this.view.toast(describe(error));
    }
  }

  /** Open the explanation drawer on one hypothesis. */
  async explain(hypothesis: string): Promise<void> {
    try {
      this.chain = await this.client.getExplanation(this.session, hypothesis, 0);
      this.view.drawer(renderExplanation(this.chain));
    } catch (error) {
      if (error instanceof ApiError && error.status === 404) {
        this.chain = [];
        this.view.drawer(renderNotFound(hypothesis));
        return;
      }
      this.view.toast(describe(error));
    }
  }

  /** Walk one step up the taxonomy, appending the parent's node. */
  async expand(): Promise<void> {
    const last = this.chain[this.chain.length - 1];
    if (last === undefined || last.parent === null) {
      return;
    }
    try {
      const nodes = await this.client.getExplanation(
        this.session,
        last.parent.hypothesis,
        0,
      );
      this.chain = this.chain.concat(nodes);
      this.view.drawer(renderExplanation(this.chain));
    } catch (error) {
      this.view.toast(describe(error));
    }
  }

  /** Preview the panel's entries without committing them. */
  async whatif(): Promise<void> {
    const entries = this.entries();
    try {
      const result = await this.client.whatif(this.session, entries);
      this.overlayState = { entries, diagnoses: result.diagnoses };
      this.view.overlay(renderDeltas(result.deltas));
    } catch (error) {
      this.overlayState = null;
      this.view.overlay("");
      this.view.toast(describe(error));
    }
  }

  /** Commit the previewed entries for real. */
  async commitWhatif(): Promise<void> {
    const overlay = this.overlayState;
    if (overlay === null) {
      return;
    }
    try {
      const rows = await this.client.putEvidence(this.session, overlay.entries);
      this.overlayState = null;
      this.view.overlay("");
      this.view.diagnoses(renderDiagnoses(rows));
    } catch (error) {
      this.view.toast(describe(error));
    }
  }

  discardWhatif(): void {
    this.overlayState = null;
    this.view.overlay("");
  }

  private renderPanel(): void {
    this.view.evidence(
      renderEvidencePanel(this.frames, this.panel, this.problems),
    );
  }
}

function describe(error: unknown): string {
  if (error instanceof ApiError) {
    return `service error ${error.status}: ${error.message}`;
  }
  return error instanceof Error ? error.message : String(error);
}
