"""Independent brute-force oracles, kept free of the library's internals."""

from math import prod


def brute_nb_predict(rows, s_vec, y_vec, x, s):
    """Counting naive Bayes by direct enumeration, exact integer arithmetic.

    score(y) is proportional to c(S=s,Y=y) * prod_i c(X_i=x_i, Y=y) / n_y^K,
    so the two classes are compared by integer cross-multiplication. Ties
    predict 0. Both classes must be present.
    """
    n1 = sum(1 for y in y_vec if y == 1)
    n0 = len(y_vec) - n1
    if n1 == 0 or n0 == 0:
        raise ValueError("both classes required")
    k = len(x)

    def cell(feature, value, label):
        return sum(1 for r, y in zip(rows, y_vec) if y == label and r[feature] == value)

    def group(label):
        return sum(1 for sv, y in zip(s_vec, y_vec) if y == label and sv == s)

    lhs = group(1) * prod(cell(i, x[i], 1) for i in range(k)) * n0 ** k
    rhs = group(0) * prod(cell(i, x[i], 0) for i in range(k)) * n1 ** k
    return 1 if lhs > rhs else 0
