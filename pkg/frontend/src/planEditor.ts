/** Form state for the similarity-plan editor: one checkbox row per entity
 * attribute with per-attribute comparer dropdowns, plus the aggregator and
 * distance-transform selectors. Submission produces the plan document the
 * prepare step accepts. */

import type { FieldError } from "./validate.js";

export interface AttributeRow {
  name: string;
  taxonomy: string;
  selected: boolean;
  elementComparer: "wuPalmer";
  attributeComparer: "symMaxMean";
  emptyAction: "ignore" | "asMaxDistance";
}

export interface PlanForm {
  aggregator: "mean";
  transformer: "squareInverse" | "linearInverse";
  attributes: AttributeRow[];
}

export const PLAN_DEFAULTS = {
  aggregator: "mean",
  transformer: "squareInverse",
  elementComparer: "wuPalmer",
  attributeComparer: "symMaxMean",
  emptyAction: "ignore",
} as const;

function defaultRow(name: string, taxonomy: string): AttributeRow {
  return {
    name,
    taxonomy,
    selected: true,
    elementComparer: PLAN_DEFAULTS.elementComparer,
    attributeComparer: PLAN_DEFAULTS.attributeComparer,
    emptyAction: PLAN_DEFAULTS.emptyAction,
  };
}

export function newPlanForm(
  attributes: { name: string; taxonomy: string }[],
): PlanForm {
  return {
    aggregator: PLAN_DEFAULTS.aggregator,
    transformer: PLAN_DEFAULTS.transformer,
    attributes: attributes.map((a) => defaultRow(a.name, a.taxonomy)),
  };
}

/** The documented "reset to defaults" action: keeps which attributes exist
 * but restores every selector and selection to the default state. */
export function resetToDefaults(form: PlanForm): PlanForm {
  return newPlanForm(form.attributes.map((a) => ({ name: a.name, taxonomy: a.taxonomy })));
}

export function validatePlanForm(form: PlanForm): FieldError[] {
  const errors: FieldError[] = [];
  if (!form.attributes.some((a) => a.selected)) {
    errors.push({
      field: "attributes",
      message: "select at least one attribute",
    });
  }
  return errors;
}

/** Build the plan document from the selected rows. Callers must validate
 * first; an empty selection would produce a plan the server rejects. */
export function buildPlan(form: PlanForm): Record<string, unknown> {
  return {
    aggregator: form.aggregator,
    transformer: form.transformer,
    attributes: form.attributes
      .filter((a) => a.selected)
      .map((a) => ({
        name: a.name,
        taxonomy: a.taxonomy,
        elementComparer: a.elementComparer,
        attributeComparer: a.attributeComparer,
        emptyAction: a.emptyAction,
      })),
  };
}
