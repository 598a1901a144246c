#include "starq/starprod.hpp"

#include <atomic>
#include <sstream>
#include <thread>

namespace starq {

std::map<std::array<int, 3>, Poly> jacobi_residual(const PoissonStructure& ps)
{
    std::map<std::array<int, 3>, Poly> out;
    int n = ps.n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                Poly r(n);
                for (int m = 0; m < n; ++m) {
                    MultiIndex em = MultiIndex::unit(n, m);
                    r += xderiv(ps.omega(i, k), em) * ps.omega(m, j);
                    r += xderiv(ps.omega(k, j), em) * ps.omega(m, i);
                    r += xderiv(ps.omega(j, i), em) * ps.omega(m, k);
                }
                if (!r.is_zero()) out[{i, j, k}] = std::move(r);
            }
    return out;
}

InvalidPoissonError::InvalidPoissonError(std::map<std::array<int, 3>, Poly> residual)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "structure fails the Jacobi identity at " << residual.size()
             << " triple(s);";
          for (const auto& [t, r] : residual) {
              os << " (" << t[0] + 1 << "," << t[1] + 1 << "," << t[2] + 1
                 << "): " << r.to_string() << ";";
              break; // first triple is enough for the message
          }
          return os.str();
      }()),
      residual_(std::move(residual))
{
}

Cochain pi1(const PoissonStructure& ps)
{
    Cochain c(2, ps.n, true);
    Rational half(1, 2);
    for (int i = 0; i < ps.n; ++i)
        for (int j = 0; j < ps.n; ++j) {
            if (i == j) continue;
            Poly w = ps.omega(i, j);
            if (w.is_zero()) continue;
            c.add_term({MultiIndex::unit(ps.n, i), MultiIndex::unit(ps.n, j)}, w * half);
        }
    return c;
}

namespace {

// Shared core of the two insertions: split the outer slot `slot` (0 = first,
// 1 = second) over the inner pair and compose normalized derivatives.
Cochain insert(const Cochain& outer, const Cochain& inner, int slot)
{
    if (outer.arity() != 2 || inner.arity() != 2)
        throw std::invalid_argument("insertion requires two 2-cochains");
    if (outer.dim() != inner.dim())
        throw std::invalid_argument("insertion dimension mismatch");

    Cochain out(3, outer.dim(), outer.tilde() && inner.tilde());
    for (const auto& [okey, oval] : outer.terms()) {
        const MultiIndex& a = okey[slot];
        const MultiIndex& keep = okey[1 - slot];
        for (const auto& split : compositions(a, 3, false)) {
            const MultiIndex& u = split[0];
            const MultiIndex& v = split[1];
            const MultiIndex& w = split[2];
            for (const auto& [ikey, ival] : inner.terms()) {
                Poly term = ival.xderiv(u);
                if (term.is_zero()) continue;
                term = term * oval *
                       Rational(compose_factor(v, ikey[0]) * compose_factor(w, ikey[1]));
                MultiIndex s1 = v + ikey[0];
                MultiIndex s2 = w + ikey[1];
                if (slot == 0)
                    out.add_term({std::move(s1), std::move(s2), keep}, term);
                else
                    out.add_term({keep, std::move(s1), std::move(s2)}, term);
            }
        }
    }
    return out;
}

} // namespace

Cochain insert_left(const Cochain& outer, const Cochain& inner)
{
    return insert(outer, inner, 0);
}

Cochain insert_right(const Cochain& outer, const Cochain& inner)
{
    return insert(outer, inner, 1);
}

Cochain omega_k(const std::vector<Cochain>& pis)
{
    if (pis.empty()) throw std::invalid_argument("omega_k needs at least Pi^1");
    int n = pis.front().dim();
    int k = static_cast<int>(pis.size()) + 1;
    Cochain omega(3, n, true);
    for (int m = 1; m <= k - 1; ++m)
        omega += insert_left(pis[k - m - 1], pis[m - 1]) -
                 insert_right(pis[m - 1], pis[k - m - 1]);
    return omega;
}

Cochain solve_order(const StarProduct& state, int k, const Cochain* gamma, int jobs)
{
    if (k < 2) throw std::invalid_argument("solve_order starts at k = 2");
    if (static_cast<int>(state.pis.size()) < k - 1)
        throw std::invalid_argument("solve_order: state is missing lower orders");
    int n = state.structure.n;

    std::vector<Cochain> lower(state.pis.begin(), state.pis.begin() + (k - 1));
    Cochain omega = omega_k(lower);

    std::map<MultiIndex, Cochain> blocks = degree_split(omega);
    std::vector<std::pair<MultiIndex, const Cochain*>> work;
    for (const auto& [l, part] : blocks) {
        if (l.order() < 3 || l.order() > 2 * k)
            throw std::logic_error("omega block degree outside [3, 2k]: " + l.to_string());
        work.push_back({l, &part});
    }

    std::vector<std::vector<Poly>> solved(work.size());
    std::vector<std::exception_ptr> errors(work.size());
    auto solve_one = [&](std::size_t idx) {
        const auto& [l, part] = work[idx];
        try {
            auto target = BlockBasis::make(3, l, true);
            std::vector<Poly> psi;
            psi.reserve(target->size());
            for (const auto& key : target->tuples) psi.push_back(part->coeff(key));
            try {
                solved[idx] = solve_block(2, l, true, psi);
            } catch (const ObstructionError& e) {
                throw ObstructionError(e.degree(), e.residual(), k);
            }
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    };

    int workers = std::min<int>(jobs, static_cast<int>(work.size()));
    if (workers > 1) {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t)
            pool.emplace_back([&] {
                for (std::size_t idx = next++; idx < work.size(); idx = next++)
                    solve_one(idx);
            });
        for (auto& t : pool) t.join();
    } else {
        for (std::size_t idx = 0; idx < work.size(); ++idx) solve_one(idx);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    Cochain pik(2, n, true);
    for (std::size_t idx = 0; idx < work.size(); ++idx) {
        auto source = BlockBasis::make(2, work[idx].first, true);
        for (int j = 0; j < source->size(); ++j)
            pik.add_term(source->tuples[j], solved[idx][j]);
    }

    if (gamma && !gamma->is_zero()) {
        if (gamma->arity() != 2 || gamma->dim() != n)
            throw std::invalid_argument("gauge cochain must be a 2-cochain on the same R^n");
        for (const auto& [key, val] : gamma->terms())
            if (has_zero_slot(key))
                throw std::invalid_argument("gauge cochain must have no zero slot");
        for (const auto& [l, part] : degree_split(*gamma)) {
            if (l.order() < 2 || l.order() > 2 * k)
                throw std::invalid_argument("gauge block degree outside [2, 2k]: " +
                                            l.to_string());
            auto block = cached_block(2, l, true);
            Projectors pr = projectors(2, l, true);
            std::vector<Poly> g;
            g.reserve(block->source->size());
            for (const auto& key : block->source->tuples) g.push_back(part.coeff(key));
            std::vector<Poly> proj = apply_matrix(pr.ker, g);
            for (int j = 0; j < block->source->size(); ++j)
                pik.add_term(block->source->tuples[j], proj[j]);
        }
    }
    return pik;
}

StarProduct build(const PoissonStructure& ps, int K, const GaugeChoice& gauge, int jobs)
{
    if (K < 1) throw std::invalid_argument("build requires order K >= 1");
    auto residual = jacobi_residual(ps);
    if (!residual.empty()) throw InvalidPoissonError(std::move(residual));

    StarProduct s;
    s.structure = ps;
    s.order = K;
    s.gauge = gauge.empty() ? "zero" : "custom";
    s.pis.push_back(pi1(ps));
    for (int k = 2; k <= K; ++k) {
        auto it = gauge.find(k);
        const Cochain* gamma = it == gauge.end() ? nullptr : &it->second;
        s.pis.push_back(solve_order(s, k, gamma, jobs));
    }
    return s;
}

std::vector<Poly> star_eval(const StarProduct& s, const Poly& f, const Poly& g)
{
    if (f.dim() != s.structure.n || g.dim() != s.structure.n)
        throw std::invalid_argument("star_eval dimension mismatch");
    std::vector<Poly> out;
    out.reserve(s.order + 1);
    out.push_back(f * g);
    for (const auto& pik : s.pis) out.push_back(apply(pik, {f, g}));
    return out;
}

std::vector<Poly> associator(const StarProduct& s, const Poly& f, const Poly& g,
                             const Poly& h)
{
    int n = s.structure.n;
    if (f.dim() != n || g.dim() != n || h.dim() != n)
        throw std::invalid_argument("associator dimension mismatch");
    int K = s.order;
    auto term = [&](int u, const Poly& a, const Poly& b) {
        return u == 0 ? a * b : apply(s.pis[u - 1], {a, b});
    };
    std::vector<Poly> fg = star_eval(s, f, g);
    std::vector<Poly> gh = star_eval(s, g, h);
    std::vector<Poly> out(K + 1, Poly::zero(n));
    for (int r = 0; r <= K; ++r)
        for (int u = 0; u + r <= K; ++u) {
            out[r + u] += term(u, fg[r], h);
            out[r + u] -= term(u, f, gh[r]);
        }
    return out;
}

} // namespace starq
