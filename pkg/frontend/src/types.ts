export type SpecimenStatus = "active" | "flagged_infinite" | "deleted";

export interface SpecimenMachine {
  machine_id: string;
  text: string;
  selection_count: number;
}

export interface GeoLocation {
  latitude: number;
  longitude: number;
}

export interface Specimen {
  id: string;
  fancy_name: string;
  dimension: number | null;
  n_steps: number;
  o2_mean: number;
  o2_floor: number;
  observer: string;
  location: GeoLocation | null;
  machines: SpecimenMachine[];
  seed: number;
  found_at: string;
  status: SpecimenStatus;
}

export interface SpecimenPage {
  total: number;
  limit: number;
  offset: number;
  specimens: Specimen[];
}

export interface PowerLawFit {
  d_hat: number;
  intercept: number;
  residual: number;
  point_count: number;
}

export interface Stats {
  insufficient_data: boolean;
  sample_count?: number;
  iq: Record<string, number>;
  eq: Record<string, number>;
  fit: PowerLawFit | null;
}

export type SortKey = "dimension" | "n_steps" | "found_at";
