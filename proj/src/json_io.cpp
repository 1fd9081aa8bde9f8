#include "pclab/json_io.hpp"

#include <fstream>

namespace pclab::json_io {

namespace {

[[noreturn]] void fail(const std::string& what)
{
    throw std::invalid_argument("json: " + what);
}

int read_n(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("n") || !j["n"].is_number_integer())
        fail("expected an object with integer field \"n\"");
    const int n = j["n"].get<int>();
    if (n < 1)
        fail("\"n\" must be >= 1");
    return n;
}

std::vector<int> read_exponents(const nlohmann::json& term, const char* key, int n)
{
    std::vector<int> e(static_cast<std::size_t>(n * n), 0);
    if (!term.contains(key))
        return e;
    const auto& rows = term[key];
    if (!rows.is_array() || static_cast<int>(rows.size()) != n)
        fail(std::string("\"") + key + "\" must be an n x n array");
    for (int i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            fail(std::string("\"") + key + "\" must be an n x n array");
        for (int k = 0; k < n; ++k) {
            const auto& v = row[static_cast<std::size_t>(k)];
            if (!v.is_number_integer() || v.get<int>() < 0)
                fail(std::string("\"") + key + "\" entries must be nonnegative integers");
            e[static_cast<std::size_t>(i * n + k)] = v.get<int>();
        }
    }
    return e;
}

nlohmann::json exponents_to_json(const std::vector<int>& e, int n)
{
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < n; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int k = 0; k < n; ++k)
            row.push_back(e[static_cast<std::size_t>(i * n + k)]);
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

ComplexMatrix matrix_from_json(const nlohmann::json& j)
{
    const int n = read_n(j);
    if (!j.contains("entries") || !j["entries"].is_array() || static_cast<int>(j["entries"].size()) != n * n)
        fail("\"entries\" must hold n*n [re, im] pairs");
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const auto& p = j["entries"][static_cast<std::size_t>(i * n + k)];
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
                fail("each entry must be a [re, im] pair of numbers");
            m(i, k) = complex_t(p[0].get<double>(), p[1].get<double>());
        }
    return ComplexMatrix(std::move(m));
}

nlohmann::json matrix_to_json(const ComplexMatrix& m)
{
    const auto n = m.size();
    nlohmann::json entries = nlohmann::json::array();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index k = 0; k < n; ++k)
            entries.push_back({m(i, k).real(), m(i, k).imag()});
    return {{"n", n}, {"entries", std::move(entries)}};
}

harmonics::BidegreePolynomial polynomial_from_json(const nlohmann::json& j)
{
    const int n = read_n(j);
    if (!j.contains("terms") || !j["terms"].is_array())
        fail("\"terms\" must be an array");
    harmonics::BidegreePolynomial f(n);
    for (const auto& term : j["terms"]) {
        if (!term.is_object())
            fail("each term must be an object");
        harmonics::Monomial m{n, read_exponents(term, "alpha", n), read_exponents(term, "beta", n)};
        if (!term.contains("re") || !term["re"].is_number())
            fail("each term needs a numeric \"re\"");
        const double re = term["re"].get<double>();
        double im = 0.0;
        if (term.contains("im")) {
            if (!term["im"].is_number())
                fail("\"im\" must be numeric");
            im = term["im"].get<double>();
        }
        f.add_term(m, complex_t(re, im));
    }
    return f;
}

nlohmann::json polynomial_to_json(const harmonics::BidegreePolynomial& f)
{
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [m, c] : f.terms())
        terms.push_back({{"alpha", exponents_to_json(m.alpha, f.n())},
                         {"beta", exponents_to_json(m.beta, f.n())},
                         {"re", c.real()},
                         {"im", c.imag()}});
    return {{"n", f.n()}, {"terms", std::move(terms)}};
}

nlohmann::json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument("'" + path + "': " + e.what());
    }
}

} // namespace pclab::json_io
