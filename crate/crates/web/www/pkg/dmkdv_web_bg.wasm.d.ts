/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_series_free: (a: number, b: number) => void;
export const asymptotic: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const reflection_modulus: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const series_n_min: (a: number) => number;
export const series_values: (a: number) => [number, number];
export const simulate: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
