/**
 * API payload schemas, validated at the network boundary with zod so the
 * rest of the client works with checked types only.
 */

import { z } from "zod";

export const EntityKeySchema = z.object({
  kind: z.string(),
  canonical: z.string(),
});
export type EntityKey = z.infer<typeof EntityKeySchema>;

export const FacetCountSchema = EntityKeySchema.extend({
  count: z.number().int().nonnegative(),
});
export type FacetCount = z.infer<typeof FacetCountSchema>;

export const SearchHitSchema = z.object({
  paper_id: z.string(),
  score: z.number(),
  matched_fields: z.array(z.string()),
  snippet: z.string().nullable().optional(),
  title: z.string(),
  venue: z.string().nullable().optional(),
  year: z.number().int().nullable().optional(),
});
export type SearchHit = z.infer<typeof SearchHitSchema>;

export const SearchResponseSchema = z.object({
  results: z.array(SearchHitSchema),
  facets: z.array(FacetCountSchema),
  profile_origin: z.string().nullable(),
});
export type SearchResponse = z.infer<typeof SearchResponseSchema>;

export const ObjectiveSchema = z.object({
  query_saliency: z.number(),
  entity_coverage: z.number(),
  diversity: z.number(),
  text_coverage: z.number(),
  length: z.number(),
  product: z.number(),
});
export type Objective = z.infer<typeof ObjectiveSchema>;

export const SummarySectionSchema = z.object({
  section_id: z.number().int(),
  title: z.string(),
  sentences: z.array(z.string()),
  objective: ObjectiveSchema,
  entities: z.array(EntityKeySchema),
  iterations_used: z.number().int(),
});
export type SummarySection = z.infer<typeof SummarySectionSchema>;

export const SummarizeResponseSchema = z.object({
  paper_id: z.string(),
  sections: z.array(SummarySectionSchema),
  profile_origin: z.string(),
});
export type SummarizeResponse = z.infer<typeof SummarizeResponseSchema>;

export const PaperSectionSchema = z.object({
  section_id: z.number().int(),
  title: z.string(),
  text: z.string(),
  sentences: z.array(z.string()),
  ref_mentions: z.array(z.object({ position: z.number().int(), ref_id: z.string() })),
});
export type PaperSection = z.infer<typeof PaperSectionSchema>;

export const PaperResponseSchema = z.object({
  id: z.string(),
  title: z.string(),
  abstract: z.string().nullable().optional(),
  authors: z.array(z.string()),
  venue: z.string().nullable().optional(),
  year: z.number().int().nullable().optional(),
  source: z.string().nullable().optional(),
  sections: z.array(PaperSectionSchema),
  figures: z.array(z.object({ ref_id: z.string(), caption: z.string() })),
  entities: z.array(
    EntityKeySchema.extend({
      section_id: z.number().int(),
      sentence_id: z.number().int(),
      surface: z.string(),
    }),
  ),
});
export type PaperResponse = z.infer<typeof PaperResponseSchema>;
