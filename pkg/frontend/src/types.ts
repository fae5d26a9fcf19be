export type CellType = "D" | "R" | "E" | "P";

export interface EvsePrediction {
  row: number;
  col: number;
  tau_kw: number;
  p_tot_kwh: number;
  reachable: boolean;
}

export interface PredictResponse {
  model_id: number;
  m: number;
  evses: EvsePrediction[];
}
