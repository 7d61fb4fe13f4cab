"""Published reference values used by the self-checks and tests.

Table rows: (gamma_1, gamma_2, lambda_s, lambda_1, lambda_2, I_S, I_1, I_2,
q_1, q_2, Pi_S, Pi_1, Pi_2, Pi_HQ), printed to two decimals for b=12,
E[theta_S]=60, E[theta_1]=E[theta_2]=100. The printed sharing parameters are
rounded optimal rules; the rows are reproduced at the exact optimum.
"""

FIRST_BEST_SYMMETRIC = [
    (0.5, 0.5, 1, 0.5, 0.5, 10, 10, 10, 5, 5, 100, 50, 50, 200),
    (0.45, 0.45, 1, 0.424, 0.424, 10.47, 12.35, 12.35, 5.23, 5.23, 93.10, 58.14, 58.14, 209.38),
    (0.40, 0.40, 1, 0.361, 0.361, 11.07, 15.33, 15.33, 5.53, 5.53, 85.67, 67.82, 67.82, 221.30),
    (0.35, 0.35, 1, 0.307, 0.307, 11.86, 19.32, 19.32, 5.93, 5.93, 77.13, 80.08, 80.08, 237.29),
    (0.30, 0.30, 1, 0.262, 0.262, 12.94, 24.69, 24.69, 6.47, 6.47, 67.02, 95.87, 95.87, 258.77),
    (0.25, 0.25, 1, 0.222, 0.222, 14.56, 32.79, 32.79, 7.28, 7.28, 52.79, 119.18, 119.18, 291.15),
]
SECOND_BEST_SYMMETRIC = [
    (0.5, 0.5, 1, 0.5, 0.5, 4, 4, 4, 4, 4, 88, 44, 44, 176),
    (0.45, 0.45, 1, 0.424, 0.424, 3.67, 5.29, 5.29, 4.08, 4.08, 83.14, 49.02, 49.02, 181.18),
    (0.40, 0.40, 1, 0.361, 0.361, 3.35, 6.97, 6.97, 4.19, 4.19, 78.78, 54.55, 54.55, 187.89),
    (0.35, 0.35, 1, 0.307, 0.307, 3.04, 9.23, 9.23, 4.36, 4.36, 74.92, 61.01, 61.01, 196.93),
    (0.30, 0.30, 1, 0.262, 0.262, 2.75, 12.24, 12.24, 4.58, 4.58, 71.85, 68.56, 68.56, 208.97),
    (0.25, 0.25, 1, 0.222, 0.222, 2.46, 16.65, 16.65, 4.93, 4.93, 69.67, 78.46, 78.46, 226.59),
]
FIRST_BEST_NONSYMMETRIC = [
    (0.5, 0.5, 1, 0.5, 0.5, 10, 10, 10, 5, 5, 100, 50, 50, 200),
    (0.55, 0.45, 1, 0.534, 0.463, 10.02, 9.25, 10.98, 4.94, 5.08, 100.02, 42.96, 57.48, 200.46),
    (0.60, 0.40, 1, 0.564, 0.425, 10.09, 8.68, 12.22, 4.90, 5.19, 100.12, 36.32, 65.36, 201.80),
    (0.65, 0.35, 1, 0.590, 0.385, 10.21, 8.26, 13.87, 4.87, 5.34, 100.32, 29.73, 74.21, 204.26),
    (0.70, 0.30, 1, 0.609, 0.343, 10.42, 7.99, 16.18, 4.87, 5.55, 100.56, 23.18, 84.61, 208.35),
    (0.75, 0.25, 1, 0.621, 0.301, 10.73, 7.86, 19.42, 4.88, 5.85, 101.05, 16.36, 97.16, 214.57),
]
SECOND_BEST_NONSYMMETRIC = [
    (0.5, 0.5, 1, 0.5, 0.5, 4, 4, 4, 4, 4, 88, 44, 44, 176),
    (0.55, 0.45, 1, 0.534, 0.463, 4.00, 3.32, 4.84, 3.94, 4.07, 88.02, 39.00, 49.31, 176.32),
    (0.60, 0.40, 1, 0.564, 0.425, 4.00, 2.76, 5.87, 3.90, 4.16, 88.10, 34.30, 54.86, 177.26),
    (0.65, 0.35, 1, 0.590, 0.385, 4.00, 2.29, 7.21, 3.86, 4.27, 88.26, 29.70, 61.03, 178.99),
    (0.70, 0.30, 1, 0.609, 0.343, 4.00, 1.88, 9.03, 3.82, 4.42, 88.47, 25.23, 68.13, 181.82),
    (0.75, 0.25, 1, 0.621, 0.301, 4.00, 1.52, 11.55, 3.79, 4.63, 88.92, 20.75, 76.46, 186.13),
]

FIRST_BEST_ROWS = FIRST_BEST_SYMMETRIC + FIRST_BEST_NONSYMMETRIC
SECOND_BEST_ROWS = SECOND_BEST_SYMMETRIC + SECOND_BEST_NONSYMMETRIC
ROW_FIELDS = ("i_s", "i_1", "i_2", "q_1", "q_2", "pi_s", "pi_1", "pi_2", "pi_hq")

# (lambda_1, lambda_2) configurations appearing in the scenario grids
LAMBDA_CONFIGS = [
    (0.5, 0.5), (0.424, 0.424), (0.361, 0.361), (0.307, 0.307), (0.262, 0.262),
    (0.222, 0.222), (0.534, 0.463), (0.564, 0.425), (0.590, 0.385), (0.609, 0.343),
    (0.621, 0.301),
]
SYMMETRIC_GAMMA_GRID = (0.25, 0.30, 0.35, 0.40, 0.45, 0.50, 0.55)
NONSYMMETRIC_GAMMA_GRID = ((0.5, 0.5), (0.55, 0.45), (0.60, 0.40), (0.65, 0.35),
                           (0.70, 0.30), (0.75, 0.25))
DISCOUNT_GRID = tuple(round(0.1 * k, 1) for k in range(10))
