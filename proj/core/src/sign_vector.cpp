#include "signspan/sign_vector.hpp"

#include <istream>
#include <sstream>

namespace signspan {

std::vector<SignVector> all_sign_vectors(int n) {
    std::vector<SignVector> out;
    out.reserve(std::size_t{1} << n);
    enumerate_sign_vectors(n, [&](const SignVector& v) { out.push_back(v); });
    return out;
}

SignMatrix random_sign_matrix(int p, int n, CounterRng& rng) {
    if (p < 1 || n < 1 || n > SignVector::kMaxLen)
        throw std::invalid_argument("random_sign_matrix: bad shape");
    SignMatrix m(p, n);
    for (int i = 0; i < p; ++i) m.rows[i] = SignVector(n, rng.next() & SignVector::mask(n));
    return m;
}

ExactMatrix to_exact_matrix(const SignMatrix& m) {
    ExactMatrix e(m.p, m.n);
    for (int i = 0; i < m.p; ++i)
        for (int j = 0; j < m.n; ++j) e.at(i, j) = m.rows[i].coord(j);
    return e;
}

IntMatrix to_int_rows(const SignMatrix& m) {
    IntMatrix rows(m.p);
    for (int i = 0; i < m.p; ++i) rows[i] = m.rows[i].to_ints();
    return rows;
}

SignMatrix parse_sign_matrix(std::istream& in) {
    std::vector<SignVector> rows;
    std::string line;
    int n = -1;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t start = line.find_first_not_of(" \t");
        if (start == std::string::npos) continue;
        if (line[start] == '#') continue;
        std::uint64_t bits = 0;
        int len = 0;
        for (std::size_t k = start; k < line.size(); ++k) {
            const char ch = line[k];
            if (ch == ' ' || ch == '\t') continue;
            if (ch == '+') {
                ++len;
            } else if (ch == '-') {
                bits |= std::uint64_t{1} << len;
                ++len;
            } else {
                throw std::invalid_argument("matrix text: bad character '" + std::string(1, ch) +
                                            "' on line " + std::to_string(lineno));
            }
            if (len > SignVector::kMaxLen)
                throw std::invalid_argument("matrix text: row too long on line " + std::to_string(lineno));
        }
        if (len == 0)
            throw std::invalid_argument("matrix text: empty row on line " + std::to_string(lineno));
        if (n < 0) n = len;
        if (len != n)
            throw std::invalid_argument("matrix text: inconsistent row length on line " +
                                        std::to_string(lineno));
        rows.push_back(SignVector(n, bits));
    }
    if (rows.empty()) throw std::invalid_argument("matrix text: no rows");
    SignMatrix m(static_cast<int>(rows.size()), n);
    m.rows = std::move(rows);
    return m;
}

SignMatrix parse_sign_matrix_text(const std::string& text) {
    std::istringstream in(text);
    return parse_sign_matrix(in);
}

std::string format_sign_matrix(const SignMatrix& m) {
    std::string out;
    out.reserve(static_cast<std::size_t>(m.p) * (m.n + 1));
    for (const auto& row : m.rows) {
        for (int j = 0; j < m.n; ++j) out.push_back(row.coord(j) > 0 ? '+' : '-');
        out.push_back('\n');
    }
    return out;
}

}  // namespace signspan
