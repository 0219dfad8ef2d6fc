#ifndef DIFFINV_SCALAR_HPP
#define DIFFINV_SCALAR_HPP

#include <gmpxx.h>
#include <string>

namespace diffinv {

// Exact rational scalar. All symbolic paths use QQ; doubles appear only in
// the numeric root-finding of the equivalence module.
using QQ = mpq_class;
using ZZ = mpz_class;

inline QQ qq_of(long n) { return QQ(n); }

inline QQ qq_of(long n, long d) {
    QQ q(n, d);
    q.canonicalize();
    return q;
}

inline QQ qq_parse(const std::string& s) {
    QQ q(s);
    q.canonicalize();
    return q;
}

inline std::string to_string(const QQ& q) { return q.get_str(); }

inline int sign(const QQ& q) { return sgn(q); }

inline double to_double(const QQ& q) { return q.get_d(); }

} // namespace diffinv

#endif
