#include "wrinkle/leaves.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace wf {

namespace {

QVec matvec(const QMat& a, const QVec& x) {
    QVec y(a.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        Rational acc = 0;
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (a(i, j) != 0 && x(j) != 0) acc += a(i, j) * x(j);
        y(i) = acc;
    }
    return y;
}

bool equal(const QVec& a, const QVec& b) {
    if (a.size() != b.size()) return false;
    for (Eigen::Index i = 0; i < a.size(); ++i)
        if (a(i) != b(i)) return false;
    return true;
}

std::string point_str(const std::vector<Rational>& q) {
    std::string s = "(";
    for (std::size_t i = 0; i < q.size(); ++i) s += (i ? "," : "") + q[i].get_str();
    return s + ")";
}

std::string vec_str(const QVec& v) {
    std::string s = "(";
    for (Eigen::Index i = 0; i < v.size(); ++i) s += (i ? "," : "") + v(i).get_str();
    return s + ")";
}

QMat pi_at(const PoissonBivector& b, const std::vector<Rational>& q) {
    return evaluate(coefficient_matrix(b.pi), q);
}

}  // namespace

LeafFrame leaf_frame(const FibrationModel& model, const std::vector<Rational>& q) {
    if (on_critical_locus(model, q)) throw SingularPoint("leaf frame requested at a critical point " + point_str(q));
    QMat J = jacobian_at(model, q);
    QMat K = kernel(J);
    if (K.cols() != 2)
        throw SingularPoint("Jacobian kernel has dimension " + std::to_string(K.cols()) + " at " + point_str(q));
    QMat O = orthogonalize(K);
    LeafFrame f;
    f.q = q;
    f.u = O.col(0);
    f.v = O.col(1);
    f.u_norm2 = dot(f.u, f.u);
    f.v_norm2 = dot(f.v, f.v);
    return f;
}

QVec solve_structure_covector(const PoissonBivector& b, const std::vector<Rational>& q, const QVec& w) {
    auto x = solve(pi_at(b, q), w);
    if (!x) throw InconsistentSystem("w = " + vec_str(w) + " is outside the image of pi at " + point_str(q));
    return *x;
}

LeafFrame full_leaf_frame(const PoissonBivector& b, const std::vector<Rational>& q) {
    LeafFrame f = leaf_frame(b.model, q);
    QMat P = pi_at(b, q);
    auto a = solve(P, f.u);
    auto c = solve(P, f.v);
    if (!a || !c) throw InconsistentSystem("leaf frame is not in the image of pi at " + point_str(q));
    f.alpha = *a;
    f.beta = *c;
    return f;
}

std::string LeafCoefficient::decimal() const {
    std::ostringstream os;
    os << std::setprecision(15) << static_cast<double>(value);
    return os.str();
}

LeafCoefficient leaf_coefficient(const LeafFrame& f) {
    LeafCoefficient c;
    c.alpha_v = dot(f.alpha, f.v);
    c.beta_u = dot(f.beta, f.u);
    if (c.alpha_v != -c.beta_u)
        throw std::logic_error("pairing antisymmetry violated: <alpha,v> = " + c.alpha_v.get_str() +
                               ", <beta,u> = " + c.beta_u.get_str());
    c.sign = sign(c.alpha_v);
    c.lambda2 = c.alpha_v * c.alpha_v / (f.u_norm2 * f.v_norm2);
    c.value = c.sign * std::sqrt(to_long_double(c.lambda2));
    return c;
}

LeafCoefficient leaf_coefficient(const PoissonBivector& b, const std::vector<Rational>& q) {
    return leaf_coefficient(full_leaf_frame(b, q));
}

LeafCoefficient leaf_coefficient(const FibrationModel& model, const std::vector<Rational>& q, const Poly& k) {
    return leaf_coefficient(flaschka_ratiu(model, k), q);
}

CheckReport leaf_relations(const PoissonBivector& b, int count, Rng& rng) {
    const auto& m = b.model;
    auto points = regular_points_sample(m, count, rng);
    auto fail = [&](const std::string& what, const std::vector<Rational>& q) {
        return make_report(m.id(), "leaf-relations", false, what, point_str(q));
    };
    std::vector<std::vector<Poly>> grads;
    for (const auto& c : m.casimirs) grads.push_back(gradient(c));
    for (const auto& q : points) {
        LeafFrame f;
        try {
            f = full_leaf_frame(b, q);
        } catch (const std::exception& e) {
            return fail(e.what(), q);
        }
        QMat P = pi_at(b, q);
        if (!equal(matvec(P, f.alpha), f.u)) return fail("pi alpha != u", q);
        if (!equal(matvec(P, f.beta), f.v)) return fail("pi beta != v", q);
        if (dot(f.alpha, f.v) + dot(f.beta, f.u) != 0) return fail("<alpha,v> + <beta,u> != 0", q);
        if (dot(f.u, f.v) != 0) return fail("frame not orthogonal", q);
        for (const auto& g : grads) {
            Rational du = 0, dv = 0;
            for (std::size_t j = 0; j < g.size(); ++j) {
                Rational gj = g[j].evaluate(q);
                du += gj * f.u(j);
                dv += gj * f.v(j);
            }
            if (du != 0 || dv != 0) return fail("frame not annihilated by a Casimir differential", q);
        }
        // shift alpha by a random element of ker pi(q)
        QMat K = kernel(P);
        QVec shifted = f.alpha;
        for (Eigen::Index c = 0; c < K.cols(); ++c) {
            Rational r = rng.rational();
            for (Eigen::Index i = 0; i < shifted.size(); ++i) shifted(i) += r * K(i, c);
        }
        if (dot(shifted, f.v) != dot(f.alpha, f.v)) return fail("pairing depends on the covector choice", q);
    }
    return make_report(m.id(), "leaf-relations", true,
                       std::to_string(points.size()) +
                           " points: pi alpha = u, pi beta = v, <alpha,v> = -<beta,u>, dC(u) = dC(v) = 0, "
                           "kernel shifts leave <alpha,v> fixed; k = " + b.k.str());
}

long double PointView::operator()(const std::string& name) const {
    return values_.at(chart_->index(expand_placeholders(name, n_)));
}

const std::vector<PrintedLeafFormula>& printed_leaf_formulas() {
    using std::sqrt;
    static const std::vector<PrintedLeafFormula> table = [] {
        std::vector<PrintedLeafFormula> f;
        auto fold = [](const PointView& p) {
            long double x1 = p("x1"), x3 = p("x3");
            return x1 * x1 / (2 * sqrtl(x1 * x1 + x3 * x3));
        };
        auto cusp = [](const PointView& p) {
            long double a = p("t1") - p("x1") * p("x1"), x3 = p("x3");
            return 3 * p("x2") * a / sqrtl(9 * a * a + 4 * x3 * x3);
        };
        auto swal = [](const PointView& p) {
            long double x1 = p("x1"), a = p("t2") + 2 * p("t1") * x1 + 4 * x1 * x1 * x1, x3 = p("x3");
            return -a / sqrtl(a * a + 4 * x3 * x3);
        };
        auto butt = [](const PointView& p) {
            long double x1 = p("x1");
            long double a = p("t3") + x1 * (2 * p("t2") + 3 * p("t1") * x1 + 5 * x1 * x1 * x1), x3 = p("x3");
            return -a / sqrtl(a * a + 4 * x3 * x3);
        };
        f.push_back({"leaf/fold", "fold", "indefinite fold", true, 3, 3, fold});
        f.push_back({"leaf/fold-def1", "fold-def1", "definite fold (first)", false, 3, 3,
                     [fold](const PointView& p) { return -fold(p); }});
        f.push_back({"leaf/fold-def2", "fold-def2", "definite fold (second)", false, 3, 3, fold});
        f.push_back({"leaf/cusp", "cusp", "indefinite cusp", true, 3, 3, cusp});
        f.push_back({"leaf/cusp-definite", "cusp-def1", "definite cusp", false, 3, 3, cusp});
        f.push_back({"leaf/cusp-definite", "cusp-def2", "definite cusp", false, 3, 3, cusp});
        f.push_back({"leaf/swallowtail", "swallowtail", "indefinite swallowtail", true, 3, 3, swal});
        f.push_back({"leaf/swallowtail-definite", "swallowtail-def1", "definite swallowtail", false, 3, 3, swal});
        f.push_back({"leaf/swallowtail-definite", "swallowtail-def2", "definite swallowtail", false, 3, 3, swal});
        f.push_back({"leaf/butterfly", "butterfly", "indefinite butterfly", true, 3, 3, butt});
        f.push_back({"leaf/butterfly-definite", "butterfly-def1", "definite butterfly", false, 3, 3, butt});
        f.push_back({"leaf/butterfly-definite", "butterfly-def2", "definite butterfly", false, 3, 3, butt});

        f.push_back({"leaf/lefschetz", "lefschetz", "Lefschetz-type singularity", true, 2, 99,
                     [](const PointView& p) {
                         long double T = p("T"), x1 = p("x1"), x2 = p("x2"), x3 = p("x3");
                         return 1 / (T * T + x1 * x1 + x2 * x2 + x3 * x3);
                     }});
        f.push_back({"leaf/fold-gblf", "fold-2n", "indefinite fold, generalized bLf", true, 3, 99,
                     [](const PointView& p) {
                         long double x1 = p("x1"), x2 = p("x2"), x3 = p("x3");
                         return 1 / sqrtl(x1 * x1 + x2 * x2 + x3 * x3);
                     }});
        f.push_back({"leaf/fold-2n", "fold-2n", "fold, type-2n wrinkled fibration", true, 3, 99, fold});
        // the printed type-2n cusp mixes t_{2n-5} in the numerator with t1 in the root
        f.push_back({"leaf/cusp-2n", "cusp", "cusp, type-2n wrinkled fibration", true, 4, 99,
                     [](const PointView& p) {
                         long double x1 = p("x1"), x3 = p("x3");
                         long double a = p("T5") - x1 * x1, b = p("t1") - x1 * x1;
                         return 3 * p("x2") * a / sqrtl(9 * b * b + 4 * x3 * x3);
                     }});
        f.push_back({"leaf/swallowtail-2n", "swallowtail", "swallowtail, type-2n wrinkled fibration", true, 4, 99,
                     [](const PointView& p) {
                         long double x1 = p("x1"), a = p("T4") + 2 * p("T5") * x1 + 4 * x1 * x1 * x1, x3 = p("x3");
                         return -a / sqrtl(a * a + 4 * x3 * x3);
                     }});
        f.push_back({"leaf/butterfly-2n", "butterfly", "butterfly, type-2n wrinkled fibration", true, 4, 99,
                     [](const PointView& p) {
                         long double x1 = p("x1");
                         long double a = p("T") + x1 * (2 * p("T4") + 3 * p("T5") * x1 + 5 * x1 * x1 * x1);
                         long double x3 = p("x3");
                         return -a / sqrtl(a * a + 4 * x3 * x3);
                     }});
        auto cubic = [](long double a, long double c, const PointView& p) {
            long double r = p("x2") * p("x2") + p("x3") * p("x3");
            return a / sqrtl(a * a * (c * a * a + 4 * r));
        };
        f.push_back({"leaf/b_s", "b_s", "deformation b_s", true, 3, 99, [cubic](const PointView& p) {
                         long double a = p("s") - p("T") * p("T") + p("x1") * p("x1");
                         return cubic(a, 9, p);
                     }});
        f.push_back({"leaf/m_s", "m_s", "deformation m_s", true, 3, 99, [cubic](const PointView& p) {
                         long double a = p("s") - p("T") * p("T") - p("x1") * p("x1");
                         return -cubic(a, 9, p);
                     }});
        f.push_back({"leaf/f_s", "f_s", "deformation f_s", true, 3, 99, [cubic](const PointView& p) {
                         long double x1 = p("x1");
                         long double a = p("T") - 2 * p("s") * x1 + 4 * x1 * x1 * x1;
                         return cubic(a, 1, p);
                     }});
        f.push_back({"leaf/w_s", "w_s", "deformation w_s", true, 3, 99, [](const PointView& p) {
                         long double s = p("s"), T = p("T"), x1 = p("x1"), x2 = p("x2"), x3 = p("x3");
                         long double g = T * x2 + x1 * x3;
                         long double A = s * T + 2 * (T * T + x1 * x1);
                         long double B = x3 * (s + 2 * T) - 2 * x1 * x2;
                         long double R = T * T + x1 * x1 + x2 * x2 + x3 * x3;
                         long double mu2 = g * g * (s * s * (T * T + x2 * x2 + x3 * x3) + 4 * s * T * R + 4 * R * R) *
                                           (s * s * (T * T + x3 * x3) + 4 * (T * T + x1 * x1) * R +
                                            4 * s * (T * T * T - x1 * x2 * x3 + T * (x1 * x1 + x3 * x3)));
                         long double num = g * (A * A + B * B + 4 * g);
                         return num / (2 * sqrtl(mu2) * sqrtl(A * A + B * B + 4 * g * g));
                     }});
        return f;
    }();
    return table;
}

std::vector<const PrintedLeafFormula*> printed_leaf_formulas_for(const FibrationModel& m) {
    std::vector<const PrintedLeafFormula*> out;
    for (const auto& f : printed_leaf_formulas())
        if (f.kind == m.kind && m.n >= f.min_n && m.n <= f.max_n) out.push_back(&f);
    return out;
}

std::vector<LeafAudit> audit_leaf_formulas(const FibrationModel& model, int count, Rng& rng) {
    std::vector<LeafAudit> out;
    auto formulas = printed_leaf_formulas_for(model);
    if (formulas.empty()) return out;
    auto b = flaschka_ratiu(model);
    auto points = regular_points_sample(model, count, rng);
    std::vector<LeafCoefficient> lambda;
    for (const auto& q : points) lambda.push_back(leaf_coefficient(b, q));

    for (const auto* f : formulas) {
        LeafAudit a;
        a.formula = f;
        int agree = 0, same = 0, opposite = 0, undefined = 0;
        long double worst = 0, rmin = INFINITY, rmax = 0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            std::vector<long double> vals;
            for (const auto& r : points[i]) vals.push_back(to_long_double(r));
            LeafAuditRow row;
            row.q = points[i];
            row.pipeline = lambda[i].value;
            row.printed = f->value(PointView(model.chart, model.n, vals));
            long double ap = fabsl(row.pipeline), bp = fabsl(row.printed);
            if (std::isfinite(row.printed)) {
                long double scale = std::max(ap, bp);
                row.rel_residual = scale == 0 ? 0 : fabsl(ap - bp) / scale;
                row.agree = row.rel_residual <= leaf_tolerance;
                if (row.pipeline != 0 && row.printed != 0)
                    row.sign_relation = (row.pipeline > 0) == (row.printed > 0) ? 1 : -1;
                if (ap != 0) {
                    rmin = std::min(rmin, bp / ap);
                    rmax = std::max(rmax, bp / ap);
                }
                worst = std::max(worst, row.rel_residual);
            } else {
                // 0/0 in the printed closed form; removable, so not counted either way
                row.undefined = true;
                ++undefined;
            }
            agree += row.agree;
            if (row.agree) (row.sign_relation > 0 ? same : opposite) += row.sign_relation != 0;
            a.rows.push_back(std::move(row));
        }
        const int defined = static_cast<int>(points.size()) - undefined;
        std::ostringstream d;
        d << f->id << " (" << f->label << "), k = 1" << (f->has_k ? "" : " (printed form omits k)") << ": "
          << agree << "/" << defined << " points agree in |lambda| to 1e-9";
        if (undefined) d << " (" << undefined << " points where the printed form is 0/0)";
        if (agree) d << "; sign vs frame (u,v): " << same << " same, " << opposite << " opposite";
        d << "; max relative residual " << std::setprecision(6) << static_cast<double>(worst);
        if (agree < defined && rmax > 0 && (rmax - rmin) <= leaf_tolerance * rmax)
            d << "; constant ratio |printed|/|pipeline| = " << std::setprecision(12) << static_cast<double>(rmax);
        a.report = make_report(model.id(), "leaf-audit", true, d.str());
        if (agree != defined) {
            a.report.status = Status::mismatch;
            std::ostringstream w;
            int shown = 0;
            for (const auto& r : a.rows) {
                if (r.agree || r.undefined) continue;
                if (shown++ == 3) break;
                w << (shown > 1 ? "; " : "") << "q=" << point_str(r.q) << " pipeline=" << std::setprecision(12)
                  << static_cast<double>(r.pipeline) << " printed=" << static_cast<double>(r.printed);
            }
            a.report.witness = w.str();
        }
        out.push_back(std::move(a));
    }
    return out;
}

std::string render_table(const LeafAudit& audit, const ChartPtr& chart) {
    std::ostringstream os;
    os << "# " << audit.formula->id << "  point[";
    for (std::size_t i = 0; i < chart->dim(); ++i) os << (i ? "," : "") << chart->name(i);
    os << "]  pipeline  printed  rel_residual  verdict\n";
    for (const auto& r : audit.rows) {
        os << point_str(r.q) << "  " << std::setprecision(12) << static_cast<double>(r.pipeline) << "  "
           << static_cast<double>(r.printed) << "  " << std::setprecision(3) << static_cast<double>(r.rel_residual)
           << "  " << (r.undefined ? "printed-undefined" : r.agree ? "agree" : "mismatch") << "\n";
    }
    return os.str();
}

}  // namespace wf
