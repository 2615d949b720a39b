/** Rollout control panel: a state diagram with transition buttons.
 *
 * Buttons are derived strictly from the allowed_transitions list the API
 * returns for each deployment, so an illegal transition is never offerable.
 * Promotion to Full requires picking the approving gate review; rolling back
 * requires typing the deployment id as confirmation, and the prompt names
 * the predecessor that will be reinstated if one was displaced.
 */

import { ApiClient } from "./api.js";
import type { DeploymentDto } from "./types.js";

export interface TransitionButton {
  target: string;
  requiresApprovalPicker: boolean;
  requiresTypedConfirmation: boolean;
  confirmationPrompt: string | null;
}

export interface RolloutPanel {
  deploymentId: string;
  state: string;
  updateCycle: number;
  buttons: TransitionButton[];
}

export function rolloutPanel(deployment: DeploymentDto): RolloutPanel {
  const buttons = deployment.allowed_transitions.map((target): TransitionButton => {
    const rollback = target === "RolledBack";
    let prompt: string | null = null;
    if (rollback) {
      prompt = deployment.predecessor
        ? `Type "${deployment.deployment_id}" to roll back; ` +
          `${deployment.predecessor} will be reinstated to Full`
        : `Type "${deployment.deployment_id}" to roll back`;
    }
    return {
      target,
      requiresApprovalPicker: target === "Full",
      requiresTypedConfirmation: rollback,
      confirmationPrompt: prompt,
    };
  });
  return {
    deploymentId: deployment.deployment_id,
    state: deployment.state,
    updateCycle: deployment.update_cycle,
    buttons,
  };
}

export interface TransitionRequest {
  approvalRef?: string;
  typedConfirmation?: string;
}

/** Execute a button press. Client-side guards mirror the button contract. */
export async function requestTransition(
  client: ApiClient, deployment: DeploymentDto, target: string,
  options: TransitionRequest = {},
): Promise<DeploymentDto> {
  const button = rolloutPanel(deployment).buttons.find((b) => b.target === target);
  if (!button) {
    throw new Error(`transition to ${target} is not offered from ${deployment.state}`);
  }
  if (button.requiresApprovalPicker && !options.approvalRef) {
    throw new Error("promotion to Full needs the approving gate review selected");
  }
  if (button.requiresTypedConfirmation &&
      options.typedConfirmation !== deployment.deployment_id) {
    throw new Error("rollback confirmation text does not match the deployment id");
  }
  return client.transitionDeployment(
    deployment.deployment_id, target, options.approvalRef,
  );
}
