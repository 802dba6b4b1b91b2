#pragma once
// Reference implementations for cross-checking: dense, textbook, slow.
// Deliberately shares no code with the library under test.
#include <gmpxx.h>
#include <vector>

namespace oracle {

using Mat = std::vector<std::vector<mpz_class>>; // row-major, rectangular

int nrows(const Mat& a);
int ncols(const Mat& a);
Mat zeros(int r, int c);
Mat ident(int n);
Mat mul(const Mat& a, const Mat& b);
Mat hcat(const Mat& a, const Mat& b);
bool equal(const Mat& a, const Mat& b);
mpz_class det(Mat a); // Bareiss

struct Snf {
    Mat d, u, v; // u * input * v = d
    std::vector<mpz_class> div;
    int rank = 0;
};

Snf snf(Mat a);
std::vector<mpz_class> divisors(const Mat& a);
Mat kernel(const Mat& a); // columns span the integer kernel

struct GroupShape {
    int free_rank = 0;
    std::vector<mpz_class> factors; // invariant factors >= 2
    bool operator==(const GroupShape&) const = default;
};

GroupShape quotient_shape(int ambient, const Mat& rel);

// homology at the middle spot of Z^p/Rprev <-A- Z^n/Ri <-B- Z^q;
// pass a empty for a zero outgoing map
GroupShape homology_shape(int n, const Mat& a, const Mat& rprev, const Mat& b, const Mat& ri);

} // namespace oracle
