/** Gate review screen model: interactive checklist plus the decision form.
 *
 * Decisions are never optimistic: the form state only changes after the API
 * round-trip. A missing rationale is blocked client-side before any request;
 * server rejections (for example a segregation-of-duties conflict) are shown
 * inline with the error code verbatim, and the entered text is kept.
 */

import { ApiClient, ApiError } from "./api.js";
import type { GateReviewDto } from "./types.js";

export interface InlineError {
  code: string;
  text: string;
}

export class GateReviewForm {
  review: GateReviewDto;
  rationale = "";
  error: InlineError | null = null;

  constructor(private readonly client: ApiClient, review: GateReviewDto) {
    this.review = review;
  }

  get readOnly(): boolean {
    return this.review.decision !== "Open";
  }

  /** Mandatory items still blocking an approval. */
  get pendingMandatory(): string[] {
    return this.review.items
      .filter((item) => item.mandatory && item.result !== "Pass")
      .map((item) => item.item_id);
  }

  get approveEnabled(): boolean {
    return !this.readOnly && this.pendingMandatory.length === 0;
  }

  get rejectEnabled(): boolean {
    return !this.readOnly;
  }

  async recordCheck(itemId: string, result: string, evidenceRefs: string[] = []): Promise<void> {
    try {
      await this.client.recordCheck(this.review.review_id, itemId, result, evidenceRefs);
      this.review = await this.client.getReview(this.review.review_id);
      this.error = null;
    } catch (error) {
      if (error instanceof ApiError) {
        this.error = { code: error.code, text: error.message };
        return;
      }
      throw error;
    }
  }

  /** Submit a decision. Returns true when the API accepted it. */
  async submit(verdict: "approve" | "reject"): Promise<boolean> {
    if (this.rationale.trim() === "") {
      this.error = { code: "EmptyRationale", text: "a decision needs a rationale" };
      return false;
    }
    try {
      this.review = await this.client.decideGate(
        this.review.review_id, verdict, this.rationale,
      );
      this.error = null;
      return true;
    } catch (error) {
      if (error instanceof ApiError) {
        // entered rationale is deliberately preserved for the retry
        this.error = { code: error.code, text: error.message };
        return false;
      }
      throw error;
    }
  }
}

export async function openGateReviewScreen(
  client: ApiClient, reviewId: string,
): Promise<GateReviewForm> {
  return new GateReviewForm(client, await client.getReview(reviewId));
}
