import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { requestTransition, rolloutPanel } from "../src/rollout.js";
import { cannedFetch, deploymentDto, jsonResponse, metaDoc } from "./fixtures.js";

describe("rollout panel", () => {
  it("derives buttons strictly from the API's allowed transitions", () => {
    const registered = rolloutPanel(deploymentDto({
      state: "Registered", allowed_transitions: ["Staged"],
    }));
    expect(registered.buttons.map((b) => b.target)).toEqual(["Staged"]);
    const edges = metaDoc().deployment_edges;
    for (const [state, targets] of Object.entries(edges)) {
      const panel = rolloutPanel(deploymentDto({
        state, allowed_transitions: [...targets].sort(),
      }));
      for (const button of panel.buttons) {
        expect(edges[state]).toContain(button.target);
      }
    }
    expect(rolloutPanel(deploymentDto({
      state: "RolledBack", allowed_transitions: [],
    })).buttons).toEqual([]);
  });

  it("requires the approval picker for Canary to Full", () => {
    const panel = rolloutPanel(deploymentDto());
    const full = panel.buttons.find((b) => b.target === "Full")!;
    expect(full.requiresApprovalPicker).toBe(true);
    expect(full.requiresTypedConfirmation).toBe(false);
  });

  it("requires typed confirmation for rollback, naming the predecessor", () => {
    const rollback = rolloutPanel(deploymentDto())
      .buttons.find((b) => b.target === "RolledBack")!;
    expect(rollback.requiresTypedConfirmation).toBe(true);
    expect(rollback.confirmationPrompt).toContain('Type "demo:dep-2"');
    expect(rollback.confirmationPrompt).toContain("demo:dep-1 will be reinstated to Full");
    const noPred = rolloutPanel(deploymentDto({ predecessor: null }))
      .buttons.find((b) => b.target === "RolledBack")!;
    expect(noPred.confirmationPrompt).not.toContain("reinstated");
  });

  it("never sends a transition that is not offered", async () => {
    const { fetchImpl, requests } = cannedFetch([]);
    const client = new ApiClient("http://api", fetchImpl);
    const registered = deploymentDto({ state: "Registered", allowed_transitions: ["Staged"] });
    await expect(requestTransition(client, registered, "Full", { approvalRef: "x" }))
      .rejects.toThrow("not offered from Registered");
    expect(requests).toHaveLength(0);
  });

  it("guards the approval picker and confirmation text client-side", async () => {
    const { fetchImpl, requests } = cannedFetch([
      jsonResponse(deploymentDto({ state: "Full", allowed_transitions: ["Retired", "RolledBack"] })),
    ]);
    const client = new ApiClient("http://api", fetchImpl);
    const canary = deploymentDto();
    await expect(requestTransition(client, canary, "Full"))
      .rejects.toThrow("approving gate review");
    await expect(requestTransition(client, canary, "RolledBack",
                                   { typedConfirmation: "wrong" }))
      .rejects.toThrow("confirmation text does not match");
    expect(requests).toHaveLength(0);
    const promoted = await requestTransition(client, canary, "Full",
                                             { approvalRef: "demo:G3:1" });
    expect(promoted.state).toBe("Full");
    expect(requests[0].body).toEqual({ target: "Full", approval_ref: "demo:G3:1" });
  });
});
