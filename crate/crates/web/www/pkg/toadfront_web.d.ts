/* tslint:disable */
/* eslint-disable */

/**
 * A field on the half-plane grid, row-major with `θ` rows from the bottom.
 */
export class Field {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    values(): Float64Array;
    /**
     * Rightmost zero crossing on the bottom row; NaN when there is none.
     */
    readonly front: number;
    readonly n_theta: number;
    readonly n_x: number;
    readonly theta_max: number;
    readonly x_max: number;
    readonly x_min: number;
}

/**
 * `J(·, t)` on a grid over `[−1, 3] × [0, 2.5]` with `G₀ = {x ≤ 0, θ ≤ θ̄}`.
 */
export function action(kind: string, exponent: number, n_x: number, theta_bar: number, t: number): Field;

export function diffusivity(kind: string, exponent: number, eps: number, theta_max: number, n: number): Float64Array;

/**
 * Geodesic distance to the same `G₀`.
 */
export function distance(kind: string, exponent: number, n_x: number, theta_bar: number): Field;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_field_free: (a: number, b: number) => void;
    readonly action: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly diffusivity: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly distance: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly field_front: (a: number) => number;
    readonly field_n_theta: (a: number) => number;
    readonly field_n_x: (a: number) => number;
    readonly field_theta_max: (a: number) => number;
    readonly field_values: (a: number) => [number, number];
    readonly field_x_max: (a: number) => number;
    readonly field_x_min: (a: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
