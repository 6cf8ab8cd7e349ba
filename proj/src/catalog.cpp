#include "wrinkle/catalog.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace wf {

namespace {

struct KindInfo {
    std::string classification;
    int n_min, n_max;  // n_max < 0: unbounded
    bool deformation;
    bool complex_chart;
};

const std::map<std::string, KindInfo>& kind_table() {
    static const std::map<std::string, KindInfo> t = {
        {"fold", {"indefinite fold", 3, 3, false, false}},
        {"fold-def1", {"definite fold", 3, 3, false, false}},
        {"fold-def2", {"definite fold", 3, 3, false, false}},
        {"cusp", {"indefinite cusp", 3, -1, false, false}},
        {"cusp-def1", {"definite cusp", 3, 3, false, false}},
        {"cusp-def2", {"definite cusp", 3, 3, false, false}},
        {"swallowtail", {"indefinite swallowtail", 3, -1, false, false}},
        {"swallowtail-def1", {"definite swallowtail", 3, 3, false, false}},
        {"swallowtail-def2", {"definite swallowtail", 3, 3, false, false}},
        {"butterfly", {"indefinite butterfly", 3, -1, false, false}},
        {"butterfly-def1", {"definite butterfly", 3, 3, false, false}},
        {"butterfly-def2", {"definite butterfly", 3, 3, false, false}},
        {"lefschetz", {"Lefschetz-type (complex chart)", 2, -1, false, true}},
        {"fold-2n", {"type-2n indefinite fold", 3, -1, false, false}},
        {"b_s", {"deformation b_s (birth)", 3, -1, true, false}},
        {"m_s", {"deformation m_s (merge)", 3, -1, true, false}},
        {"f_s", {"deformation f_s (flip)", 3, -1, true, false}},
        {"w_s", {"deformation w_s (wrinkle)", 3, -1, true, false}},
        {"cusp-dim4", {"cusp, dimension-4 sign variant", 2, 2, false, false}},
    };
    return t;
}

// Last component(s) of the map as text; T stands for t_{2n-3}.
std::vector<std::string> tail_components(const std::string& kind) {
    static const std::map<std::string, std::vector<std::string>> t = {
        {"fold", {"-x1^2 + x2^2 + x3^2"}},
        {"fold-def1", {"x1^2 + x2^2 + x3^2"}},
        {"fold-def2", {"-x1^2 - x2^2 - x3^2"}},
        {"cusp", {"x1^3 - 3*t1*x1 + x2^2 - x3^2"}},
        {"cusp-def1", {"x1^3 - 3*t1*x1 + x2^2 + x3^2"}},
        {"cusp-def2", {"x1^3 - 3*t1*x1 - x2^2 - x3^2"}},
        {"swallowtail", {"x1^4 + t1*x1^2 + t2*x1 + x2^2 - x3^2"}},
        {"swallowtail-def1", {"x1^4 + t1*x1^2 + t2*x1 + x2^2 + x3^2"}},
        {"swallowtail-def2", {"x1^4 + t1*x1^2 + t2*x1 - x2^2 - x3^2"}},
        {"butterfly", {"x1^5 + t1*x1^3 + t2*x1^2 + t3*x1 + x2^2 - x3^2"}},
        {"butterfly-def1", {"x1^5 + t1*x1^3 + t2*x1^2 + t3*x1 + x2^2 + x3^2"}},
        {"butterfly-def2", {"x1^5 + t1*x1^3 + t2*x1^2 + t3*x1 - x2^2 - x3^2"}},
        // z_{n-1} = T + i x1, z_n = x2 + i x3; Re and Im of z_{n-1}^2 + z_n^2
        {"lefschetz", {"T^2 - x1^2 + x2^2 - x3^2", "2*T*x1 + 2*x2*x3"}},
        {"fold-2n", {"-x1^2 + x2^2 + x3^2"}},
        {"b_s", {"x1^3 - 3*x1*(T^2 - s) + x2^2 - x3^2"}},
        {"m_s", {"x1^3 - 3*x1*(s - T^2) + x2^2 - x3^2"}},
        {"f_s", {"x1^4 - x1^2*s + x1*T + x2^2 - x3^2"}},
        {"w_s", {"T^2 - x1^2 + x2^2 - x3^2 + s*T", "2*T*x1 + 2*x2*x3"}},
        {"cusp-dim4", {"x1^3 + 3*t1*x1 + x2^2 - x3^2"}},
    };
    return t.at(kind);
}

std::string substitute_T(std::string text, int n) {
    std::string name = "t" + std::to_string(2 * n - 3);
    std::string out;
    for (std::size_t i = 0; i < text.size(); ++i) {
        bool standalone = text[i] == 'T' && (i == 0 || !std::isalnum(static_cast<unsigned char>(text[i - 1]))) &&
                          (i + 1 == text.size() || !std::isalnum(static_cast<unsigned char>(text[i + 1])));
        out += standalone ? name : std::string(1, text[i]);
    }
    return out;
}

std::vector<Rational> zero_point(const ChartPtr& c) { return std::vector<Rational>(c->dim(), Rational(0)); }

}  // namespace

const std::vector<std::string>& model_kinds() {
    static const std::vector<std::string> k = {
        "fold",      "fold-def1",      "fold-def2",      "cusp",     "cusp-def1", "cusp-def2",
        "swallowtail", "swallowtail-def1", "swallowtail-def2", "butterfly", "butterfly-def1", "butterfly-def2",
        "lefschetz", "fold-2n",        "b_s",            "m_s",      "f_s",       "w_s"};
    return k;
}

const std::vector<std::string>& auxiliary_kinds() {
    static const std::vector<std::string> k = {"cusp-dim4"};
    return k;
}

bool FibrationModel::deformation() const { return kind_table().at(kind).deformation; }

std::string FibrationModel::id() const {
    std::string out = kind + "[n=" + std::to_string(n);
    if (deformation()) out += s ? ",s=" + s->get_str() : ",s=sym";
    return out + "]";
}

void check_kind(const std::string& kind, int n) {
    auto it = kind_table().find(kind);
    if (it == kind_table().end()) throw std::invalid_argument("unknown kind '" + kind + "'");
    const auto& info = it->second;
    if (n < info.n_min || (info.n_max >= 0 && n > info.n_max)) {
        std::string range = info.n_max < 0 ? ">= " + std::to_string(info.n_min)
                                           : (info.n_min == info.n_max ? "= " + std::to_string(info.n_min)
                                                                       : "in [" + std::to_string(info.n_min) + "," +
                                                                             std::to_string(info.n_max) + "]");
        throw std::invalid_argument("kind '" + kind + "' needs n " + range + ", got " + std::to_string(n));
    }
}

int default_n(const std::string& kind) {
    auto it = kind_table().find(kind);
    if (it == kind_table().end()) throw std::invalid_argument("unknown kind '" + kind + "'");
    return it->second.n_max == 2 ? 2 : 3;
}

FibrationModel get_model(const std::string& kind, int n, std::optional<Rational> s) {
    check_kind(kind, n);
    const auto& info = kind_table().at(kind);
    FibrationModel m;
    m.kind = kind;
    m.n = n;
    m.classification = info.classification;
    m.complex_chart = info.complex_chart;
    std::vector<std::string> params;
    if (info.deformation) {
        m.s = s;
        if (!s) params.push_back("s");
    }
    m.chart = type2n_chart(n, params);

    auto tails = tail_components(kind);
    std::vector<Poly> comps;
    const int keep = 2 * n - 2 - static_cast<int>(tails.size());  // coordinate components t1..t_keep
    for (int i = 1; i <= keep; ++i) comps.push_back(Poly::var(m.chart, "t" + std::to_string(i)));
    for (const auto& t : tails) {
        std::string text = substitute_T(t, n);
        if (info.deformation && s) {
            // substitute the rational value textually through a one-off chart
            auto wide = type2n_chart(n, {"s"});
            Poly p = parse_poly(text, wide).substitute(wide->index("s"), *s);
            comps.push_back(p.rechart(m.chart));
        } else {
            comps.push_back(parse_poly(text, m.chart));
        }
    }

    std::vector<std::string> tnames;
    for (int i = 1; i <= 2 * n - 2; ++i) tnames.push_back("y" + std::to_string(i));
    auto tcoord = tnames.size();
    tnames.insert(tnames.end(), params.begin(), params.end());
    m.map = PolyMap{m.chart, make_chart(tnames, tcoord), comps};
    m.casimirs = comps;

    if (tails.size() == 1) {
        const Poly& F = comps.back();
        for (const char* v : {"x1", "x2", "x3"}) m.critical_locus.push_back(F.differentiate(v));
    } else {
        // rank of the 2x4 block in (T, x1, x2, x3) drops: all 2x2 minors vanish
        std::vector<std::string> vars = {"t" + std::to_string(2 * n - 3), "x1", "x2", "x3"};
        const Poly& A = comps[comps.size() - 2];
        const Poly& B = comps.back();
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = a + 1; b < 4; ++b) {
                Poly minor = A.differentiate(vars[a]) * B.differentiate(vars[b]) -
                             A.differentiate(vars[b]) * B.differentiate(vars[a]);
                if (!minor.is_zero()) m.critical_locus.push_back(minor);
            }
    }

    if (kind == "lefschetz" || kind == "w_s")
        m.note = "real identification z_{n-1} = t" + std::to_string(2 * n - 3) + " + i*x1, z_n = x2 + i*x3";
    if (kind == "fold-def2") m.note = "negative definite: -x1^2 - x2^2 - x3^2";
    if (kind == "fold-2n") m.note = "quadratic in x1: -x1^2 + x2^2 + x3^2";
    return m;
}

std::vector<std::vector<Poly>> jacobian(const FibrationModel& m) {
    std::vector<std::vector<Poly>> J;
    for (const auto& c : m.casimirs) {
        std::vector<Poly> row;
        for (std::size_t j = 0; j < m.chart->coord_dim(); ++j) row.push_back(c.differentiate(j));
        J.push_back(std::move(row));
    }
    return J;
}

QMat jacobian_at(const FibrationModel& m, const std::vector<Rational>& point) { return evaluate(jacobian(m), point); }

bool on_critical_locus(const FibrationModel& m, const std::vector<Rational>& point) {
    return std::all_of(m.critical_locus.begin(), m.critical_locus.end(),
                       [&](const Poly& p) { return p.evaluate(point) == 0; });
}

std::vector<std::vector<Rational>> critical_points_sample(const FibrationModel& m, int count, Rng& rng) {
    std::vector<std::vector<Rational>> out;
    const auto& c = m.chart;
    auto idx = [&](const std::string& n) { return c->index(n); };
    const std::string T = "t" + std::to_string(2 * m.n - 3);
    const bool sym = m.deformation() && !m.s;
    const Rational sval = m.s.value_or(0);
    int guard = 0;
    while (static_cast<int>(out.size()) < count && guard++ < 100 * count + 100) {
        auto p = zero_point(c);
        for (std::size_t i = 0; i < c->coord_dim(); ++i) p[i] = rng.rational();
        if (sym) p[idx("s")] = rng.rational();
        const Rational x1 = p[idx("x1")];
        auto& X1 = p[idx("x1")];
        auto& X2 = p[idx("x2")];
        auto& X3 = p[idx("x3")];
        const std::string& k = m.kind;
        if (k.rfind("fold", 0) == 0) {
            X1 = X2 = X3 = 0;
        } else if (k.rfind("cusp", 0) == 0) {
            X2 = X3 = 0;
            p[idx("t1")] = k == "cusp-dim4" ? Rational(-x1 * x1) : Rational(x1 * x1);
        } else if (k.rfind("swallowtail", 0) == 0) {
            X2 = X3 = 0;
            p[idx("t2")] = -(4 * x1 * x1 * x1 + 2 * p[idx("t1")] * x1);
        } else if (k.rfind("butterfly", 0) == 0) {
            X2 = X3 = 0;
            p[idx("t3")] = -(5 * x1 * x1 * x1 * x1 + 3 * p[idx("t1")] * x1 * x1 + 2 * p[idx("t2")] * x1);
        } else if (k == "lefschetz") {
            p[idx(T)] = 0;
            X1 = X2 = X3 = 0;
        } else if (k == "b_s") {
            X2 = X3 = 0;
            if (sym) {
                p[idx("s")] = p[idx(T)] * p[idx(T)] - x1 * x1;
            } else {
                // (x1 - T)(x1 + T) = -s
                Rational a = rng.nonzero_rational();
                X1 = (a - sval / a) / 2;
                p[idx(T)] = (-sval / a - a) / 2;
            }
        } else if (k == "m_s") {
            X2 = X3 = 0;
            if (sym) {
                p[idx("s")] = x1 * x1 + p[idx(T)] * p[idx(T)];
            } else {
                // needs s = r^2 for a rational circle parametrisation
                mpz_class num = sval.get_num(), den = sval.get_den();
                if (sval < 0 || !mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
                    break;
                mpz_class rn, rd;
                mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
                mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
                Rational r(rn, rd), q = rng.rational();
                X1 = r * (1 - q * q) / (1 + q * q);
                p[idx(T)] = r * 2 * q / (1 + q * q);
            }
        } else if (k == "f_s") {
            X2 = X3 = 0;
            Rational sv = sym ? p[idx("s")] : sval;
            p[idx(T)] = 2 * sv * x1 - 4 * x1 * x1 * x1;
        } else if (k == "w_s") {
            X2 = X3 = 0;
            if (sym) {
                if (p[idx(T)] == 0) continue;
                const Rational t = p[idx(T)];
                p[idx("s")] = -2 * (t * t + x1 * x1) / t;
            } else {
                // circle: (T + s/4)^2 + x1^2 = s^2/16
                Rational q = rng.rational(), r = sval / 4;
                p[idx(T)] = -r + r * (1 - q * q) / (1 + q * q);
                X1 = r * 2 * q / (1 + q * q);
            }
        }
        if (!on_critical_locus(m, p)) throw std::logic_error("critical sampler produced a regular point for " + k);
        out.push_back(std::move(p));
    }
    return out;
}

std::vector<std::vector<Rational>> regular_points_sample(const FibrationModel& m, int count, Rng& rng) {
    std::vector<std::vector<Rational>> out;
    while (static_cast<int>(out.size()) < count) {
        auto p = zero_point(m.chart);
        for (auto& v : p) v = rng.rational();
        if (!on_critical_locus(m, p)) out.push_back(std::move(p));
    }
    return out;
}

std::string manifest_entry(const FibrationModel& m) {
    std::ostringstream os;
    os << "kind: " << m.kind << "\n";
    os << "n: " << m.n << "\n";
    os << "class: " << m.classification << "\n";
    os << "chart: ";
    for (std::size_t i = 0; i < m.chart->dim(); ++i) os << (i ? "," : "") << m.chart->name(i);
    os << "\n";
    if (m.deformation()) os << "s: " << (m.s ? m.s->get_str() : std::string("symbolic")) << "\n";
    for (std::size_t i = 0; i < m.map.components.size(); ++i)
        os << "component " << (i + 1) << ": " << m.map.components[i].str() << "\n";
    for (const auto& c : m.critical_locus) os << "critical: " << c.str() << "\n";
    if (!m.note.empty()) os << "note: " << m.note << "\n";
    return os.str();
}

std::string manifest(int n) {
    std::string out;
    for (const auto& k : model_kinds()) {
        int nn = default_n(k);
        const auto& info = kind_table().at(k);
        if (info.n_max < 0 && n >= info.n_min) nn = n;
        out += manifest_entry(get_model(k, nn)) + "\n";
    }
    return out;
}

}  // namespace wf
