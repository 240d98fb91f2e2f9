// Copyright 2026 The collective-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "clab/separability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "clab/errors.hpp"
#include "clab/qstate.hpp"
#include "clab/rng.hpp"

namespace clab {

namespace {

constexpr double kProductTol = 1e-10;

Fact fact(std::string name, double value, double tol, bool holds, std::string detail = {}) {
    return Fact{std::move(name), value, tol, holds, std::move(detail)};
}

Ket singlet() {
    const double h = 1.0 / std::sqrt(2.0);
    Ket s(4);
    s[1] = h;
    s[2] = -h;
    return s;
}

/// U (x) U (x) U for a single-qubit unitary.
Matrix triple(const Matrix &u) { return kron(kron(u, u), u); }

Matrix random_unitary2(Stream &rng) {
    const Ket a = haar_random_ket(rng);
    Matrix u(2, 2);
    u(0, 0) = a[0];
    u(1, 0) = a[1];
    u(0, 1) = -std::conj(a[1]);
    u(1, 1) = std::conj(a[0]);
    return u;
}

} // namespace

std::string to_string(Bipartition p) {
    switch (p) {
    case Bipartition::P12_3:
        return "(12|3)";
    case Bipartition::P13_2:
        return "(13|2)";
    case Bipartition::P23_1:
        return "(23|1)";
    }
    return "?";
}

std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::BiseparableConstructionFound:
        return "biseparable-construction-found";
    case Verdict::GenuinelyCollectiveCertified:
        return "genuinely-collective-certified";
    case Verdict::Inconclusive:
        return "inconclusive";
    }
    return "?";
}

Matrix bipartition_permutation(Bipartition p) {
    switch (p) {
    case Bipartition::P12_3:
        return Matrix::identity(8);
    case Bipartition::P13_2:
        return party_permutation({0, 2, 1});
    case Bipartition::P23_1:
        return party_permutation({2, 0, 1});
    }
    throw OutOfRange("bipartition");
}

Matrix bipartition_reshape(const Ket &v, Bipartition p) {
    if (v.dim() != 8) throw ShapeMismatch("bipartition_reshape expects a three-qubit ket");
    const Ket w = bipartition_permutation(p) * v;
    Matrix m(4, 2);
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 2; ++c) m(r, c) = w[r * 2 + c];
    return m;
}

bool schmidt_rank_one(const Ket &v, Bipartition p, double tol) {
    const auto sv = singular_values(bipartition_reshape(v, p));
    return sv.size() < 2 || sv[1] <= tol;
}

double operator_product_residual(const Matrix &x, Bipartition p) {
    if (x.rows() != 8 || x.cols() != 8) throw ShapeMismatch("operator_product_residual expects 8x8");
    const Matrix perm = bipartition_permutation(p);
    const Matrix y = perm * x * perm.adjoint();
    Matrix r(16, 4);
    for (std::size_t i1 = 0; i1 < 4; ++i1)
        for (std::size_t j1 = 0; j1 < 4; ++j1)
            for (std::size_t i2 = 0; i2 < 2; ++i2)
                for (std::size_t j2 = 0; j2 < 2; ++j2) r(i1 * 4 + j1, i2 * 2 + j2) = y(i1 * 2 + i2, j1 * 2 + j2);
    const auto sv = singular_values(r);
    if (sv.empty() || sv[0] == 0.0) return 0.0;
    return sv.size() < 2 ? 0.0 : sv[1] / sv[0];
}

double symmetric_weight(const Ket &Phi, const Ket &phi) {
    if (Phi.dim() != 4 || phi.dim() != 2) throw ShapeMismatch("symmetric_weight expects dims 4 and 2");
    static const Matrix P3 = symmetry_kit().P3;
    return std::max(0.0, expectation(P3, kron(Phi, phi)).real());
}

ExamplePovms example_povms(double p_mix) {
    if (!(p_mix > 0.0 && p_mix < 1.0)) throw OutOfRange("p_mix must lie in (0, 1)");
    const auto bell = bell_states();
    const std::array<Matrix, 2> z{Matrix::projector(Ket::basis(2, 0)), Matrix::projector(Ket::basis(2, 1))};
    ExamplePovms out;
    for (const auto &b : bell)
        for (std::size_t k = 0; k < 2; ++k) {
            out.A.elements.push_back(kron(Matrix::projector(b.ket), z[k]));
            out.A.labels.push_back("A" + std::to_string(out.A.size()));
        }
    for (std::size_t k = 0; k < 2; ++k)
        for (const auto &b : bell) {
            out.B.elements.push_back(kron(z[k], Matrix::projector(b.ket)));
            out.B.labels.push_back("B" + std::to_string(out.B.size()));
        }
    for (std::size_t j = 0; j < 8; ++j) {
        out.K1.elements.push_back(p_mix * out.A.elements[j]);
        out.K1.labels.push_back("pA" + std::to_string(j + 1));
    }
    for (std::size_t j = 0; j < 8; ++j) {
        out.K1.elements.push_back((1.0 - p_mix) * out.B.elements[j]);
        out.K1.labels.push_back("qB" + std::to_string(j + 1));
    }
    for (std::size_t j = 0; j < 8; ++j) {
        out.K2.elements.push_back(p_mix * out.A.elements[j] + (1.0 - p_mix) * out.B.elements[j]);
        out.K2.labels.push_back("K" + std::to_string(j + 1));
    }
    return out;
}

SeparabilityReport certify_genuinely_collective(const Povm &p) {
    if (p.dim() != 8) throw ShapeMismatch("certificate needs a three-qubit POVM");
    const SymmetryKit kit = symmetry_kit();
    const Matrix Q = Matrix::identity(8) - kit.P3;
    SeparabilityReport rep;

    // Per-element facts.
    const Matrix e7_model = (2.0 / 3.0) * (kit.Pi + kit.W.adjoint() * kit.Pi * kit.W + kit.W * kit.Pi * kit.W.adjoint());
    for (std::size_t j = 0; j < p.size(); ++j) {
        const Matrix &e = p.elements[j];
        ElementClass ec;
        ec.label = j < p.labels.size() ? p.labels[j] : "E" + std::to_string(j + 1);
        const EigenSystem es = herm_eig(e);
        ec.rank = static_cast<std::size_t>(
            std::count_if(es.values.begin(), es.values.end(), [](double v) { return v > kRankTol; }));
        if (ec.rank == 1) {
            const Ket v = es.vectors.column(7);
            for (std::size_t k = 0; k < 3; ++k) ec.product[k] = schmidt_rank_one(v, kBipartitions[k]);
            const bool all = ec.product[0] && ec.product[1] && ec.product[2];
            ec.classification = all ? "product" : "unknown";
        } else if (max_abs_diff(e, e7_model) <= kSplitTol) {
            const std::array<std::pair<Matrix, Bipartition>, 3> parts{
                std::pair{(2.0 / 3.0) * kit.Pi, Bipartition::P12_3},
                std::pair{(2.0 / 3.0) * (kit.W.adjoint() * kit.Pi * kit.W), Bipartition::P23_1},
                std::pair{(2.0 / 3.0) * (kit.W * kit.Pi * kit.W.adjoint()), Bipartition::P13_2}};
            bool ok = true;
            for (const auto &[op, cut] : parts) {
                const double r = operator_product_residual(op, cut);
                ok = ok && r <= kProductTol;
                rep.facts.push_back(fact(ec.label + " part product across " + to_string(cut), r, kProductTol,
                                         r <= kProductTol));
            }
            ec.classification = ok ? "biseparable" : "unknown";
        } else {
            ec.classification = "unknown";
        }
        rep.elements.push_back(ec);
    }

    // (a) every element lives in P3 or in I - P3.
    Matrix complement_sum = Matrix::zeros(8);
    std::size_t complement_count = 0;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const Matrix &e = p.elements[j];
        const double in_sym = max_abs_diff(e, kit.P3 * e * kit.P3);
        const double in_comp = max_abs_diff(e, Q * e * Q);
        const bool ok = std::min(in_sym, in_comp) <= kSplitTol;
        rep.facts.push_back(fact(rep.elements[j].label + " support split residual", std::min(in_sym, in_comp), kSplitTol,
                                 ok, in_sym <= in_comp ? "symmetric" : "complement"));
        if (!ok) {
            rep.verdict = Verdict::Inconclusive;
            rep.reason = rep.elements[j].label + " is supported in neither P3 nor I - P3";
            return rep;
        }
        if (in_comp <= kSplitTol && e.max_abs() > kSplitTol) {
            complement_sum += e;
            ++complement_count;
        }
    }

    // (b) rank of the complement resolution.
    rep.complement_rank = rank(complement_sum, kRankTol);
    rep.facts.push_back(fact("complement resolution rank", static_cast<double>(rep.complement_rank), kRankTol, true));
    const double resolves = max_abs_diff(complement_sum, Q);
    rep.facts.push_back(fact("complement elements sum to I - P3", resolves, kSplitTol, resolves <= kSplitTol));
    if (complement_count == 0) {
        rep.verdict = Verdict::Inconclusive;
        rep.reason = "no element is supported in I - P3";
        return rep;
    }

    // (c) per bipartition, the rank-one P-separable operators annihilated by P3.
    Stream rng = Stream::derive(0x5eedULL, {3});
    const Matrix u = random_unitary2(rng);
    const double covariance = max_abs_diff(kit.P3 * triple(u), triple(u) * kit.P3);
    rep.facts.push_back(fact("P3 commutes with U(x)U(x)U", covariance, 1e-12, covariance <= 1e-12));
    std::size_t max_block = 0;
    const Ket s = singlet();
    for (Bipartition cut : kBipartitions) {
        const Matrix perm = bipartition_permutation(cut);
        const Matrix p3 = perm * kit.P3 * perm.adjoint();
        Matrix r(4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) r(i, j) = p3(i * 2, j * 2);
        const EigenSystem es = herm_eig(r);
        std::size_t kernel = 0;
        double singlet_overlap = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
            if (es.values[k] > kRankTol) continue;
            ++kernel;
            singlet_overlap += std::norm(inner(s, es.vectors.column(k)));
        }
        std::ostringstream eig;
        eig << "eigenvalues";
        for (double v : es.values) eig << ' ' << v;
        rep.facts.push_back(fact("kernel of P3 restricted to product inputs " + to_string(cut),
                                 static_cast<double>(kernel), kRankTol, kernel == 1 && std::abs(singlet_overlap - 1.0) < 1e-10,
                                 eig.str() + "; singlet overlap " + std::to_string(singlet_overlap)));
        const std::size_t block = kernel * 2;
        rep.facts.push_back(fact("rank bound for P-separable complement resolution " + to_string(cut),
                                 static_cast<double>(block), 0.0, true));
        max_block = std::max(max_block, block);
    }

    // (d)
    if (rep.complement_rank > max_block) {
        rep.verdict = Verdict::GenuinelyCollectiveCertified;
        rep.reason = "complement resolution has rank " + std::to_string(rep.complement_rank) +
                     " but P-separable parts can reach at most " + std::to_string(max_block);
    } else {
        rep.verdict = Verdict::Inconclusive;
        rep.reason = "complement rank " + std::to_string(rep.complement_rank) + " within the separable bound";
    }
    return rep;
}

BiseparableConstruction k2_construction(double p_mix) {
    const ExamplePovms ex = example_povms(p_mix);
    BiseparableConstruction c;
    for (std::size_t j = 0; j < 8; ++j)
        c.parts.push_back({{p_mix * ex.A.elements[j], Bipartition::P12_3},
                           {(1.0 - p_mix) * ex.B.elements[j], Bipartition::P23_1}});
    return c;
}

namespace {

bool construction_facts(const Povm &p, const BiseparableConstruction &c, std::vector<Fact> &facts) {
    if (c.parts.size() != p.size()) {
        facts.push_back(fact("construction covers every element", static_cast<double>(c.parts.size()), 0.0, false));
        return false;
    }
    bool all = true;
    for (std::size_t j = 0; j < p.size(); ++j) {
        const std::string label = j < p.labels.size() ? p.labels[j] : "E" + std::to_string(j + 1);
        Matrix sum = Matrix::zeros(p.dim());
        for (std::size_t k = 0; k < c.parts[j].size(); ++k) {
            const auto &[op, cut] = c.parts[j][k];
            sum += op;
            const double r = operator_product_residual(op, cut);
            const double m = min_eigenvalue(op);
            const bool ok = r <= kProductTol && m >= -kPsdTol;
            all = all && ok;
            facts.push_back(fact(label + " part " + std::to_string(k + 1) + " product across " + to_string(cut), r,
                                 kProductTol, ok, "min eigenvalue " + std::to_string(m)));
        }
        const double d = max_abs_diff(sum, p.elements[j]);
        all = all && d <= kSplitTol;
        facts.push_back(fact(label + " equals the sum of its parts", d, kSplitTol, d <= kSplitTol));
    }
    return all;
}

} // namespace

SeparabilityReport check_biseparable_construction(const Povm &p, const BiseparableConstruction &c) {
    SeparabilityReport rep;
    const bool ok = construction_facts(p, c, rep.facts);
    rep.verdict = ok ? Verdict::BiseparableConstructionFound : Verdict::Inconclusive;
    rep.reason = ok ? "every element is a sum of PSD operators, each product across a bipartition"
                    : "construction does not verify";
    return rep;
}

void attach_counter_facts(SeparabilityReport &report, const Povm &p, const BiseparableConstruction &c) {
    std::vector<Fact> facts;
    const bool ok = construction_facts(p, c, facts);
    for (auto &f : facts) {
        f.name = "counter-fact: " + f.name;
        report.facts.push_back(std::move(f));
    }
    report.facts.push_back(fact("counter-fact: biseparable construction verified", ok ? 1.0 : 0.0, 0.0, ok));
}

nlohmann::json SeparabilityReport::to_json() const {
    nlohmann::json j;
    j["verdict"] = to_string(verdict);
    j["reason"] = reason;
    j["complement_rank"] = complement_rank;
    j["tolerances"] = {{"support_split", kSplitTol}, {"rank", kRankTol}, {"product", kProductTol}};
    j["elements"] = nlohmann::json::array();
    for (const auto &e : elements) {
        nlohmann::json pe = nlohmann::json::object();
        for (std::size_t k = 0; k < 3; ++k) pe[to_string(kBipartitions[k])] = e.product[k];
        j["elements"].push_back(
            {{"label", e.label}, {"rank", e.rank}, {"classification", e.classification}, {"product_across", pe}});
    }
    j["facts"] = nlohmann::json::array();
    for (const auto &f : facts)
        j["facts"].push_back(
            {{"name", f.name}, {"value", f.value}, {"tolerance", f.tolerance}, {"holds", f.holds}, {"detail", f.detail}});
    return j;
}

} // namespace clab
