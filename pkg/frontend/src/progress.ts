/** Session progress: per-statement completion plus the running total. */

import type { StatementView } from "./view.js";

export interface StatementProgress {
  statementId: string;
  editCount: number;
  reviewed: boolean;
}

export interface SessionProgress {
  statements: StatementProgress[];
  totalEdits: number;
}

export function sessionProgress(
  views: StatementView[],
  reviewedIds: Set<string>,
): SessionProgress {
  const statements = views.map((view) => ({
    statementId: view.statementId,
    editCount: view.editCount,
    reviewed: reviewedIds.has(view.statementId) || view.editCount > 0,
  }));
  return {
    statements,
    totalEdits: statements.reduce((sum, s) => sum + s.editCount, 0),
  };
}
