/**
 * Wire types for the consultation service.
 *
 * Everything displayed by the console comes out of these payloads;
 * the client performs no belief computation of its own.
 */

export interface Interval {
  bel: number;
  pl: number;
}

export interface DiagnosisRow {
  hypothesis: string;
  text: string;
  interval: Interval;
}

export interface ObservationNode {
  text: string;
  degree: number | null;
  children: ObservationNode[];
}

export interface Contribution {
  rule: string;
  effect: string;
  clause: string;
  inferred_degree: number;
  observations: ObservationNode[];
}

export interface ParentLink {
  hypothesis: string;
  text: string;
  interval: Interval;
}

export interface ExplanationNode {
  hypothesis: string;
  text: string;
  interval: Interval;
  contributions: Contribution[];
  parent: ParentLink | null;
}

export interface DeltaRow {
  hypothesis: string;
  text: string;
  before: Interval;
  after: Interval;
  bel_delta: number;
  pl_delta: number;
}

export interface EvidenceEntry {
  frame: string;
  element: string;
  degree: number;
}

export interface FrameInfo {
  id: string;
  name: string;
  elements: string[];
  prior: number[];
  inferred: boolean;
  consultation: boolean;
}

export interface SessionInfo {
  session_id: string;
  kb_id: string;
}

export interface FramesPayload {
  kb_id: string;
  frames: FrameInfo[];
}

export interface WhatifResult {
  diagnoses: DiagnosisRow[];
  deltas: DeltaRow[];
}

/** One bad entry in a rejected evidence submission. */
export interface EntryProblem {
  index: number;
  error: string;
}
