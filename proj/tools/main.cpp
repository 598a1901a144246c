#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>

#include "starq/json_io.hpp"
#include "starq/starprod.hpp"

namespace {

using namespace starq;

std::string key_string(const CochainKey& key)
{
    std::string s;
    for (const auto& a : key) s += a.to_string();
    return s;
}

void write_output(const Json& doc, const std::string& out)
{
    std::string text = dump_json(doc);
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out);
    if (!f) throw std::invalid_argument("cannot open output file: " + out);
    f << text;
}

int guard_order(int order, bool allow_large)
{
    if (order > 4 && !allow_large)
        throw std::invalid_argument(
            "order " + std::to_string(order) +
            " exceeds the default cap of 4 (block sizes grow combinatorially); "
            "pass --allow-large-order to override");
    return order;
}

// Deterministic: mt19937_64 is fully specified, and we avoid
// distribution classes whose output is implementation-defined.
Poly random_poly(std::mt19937_64& rng, int n, int max_degree)
{
    Poly f(n);
    int terms = 1 + static_cast<int>(rng() % 3);
    for (int t = 0; t < terms; ++t) {
        int deg = static_cast<int>(rng() % (static_cast<unsigned>(max_degree) + 1));
        MultiIndex e(n);
        for (int d = 0; d < deg; ++d) e[static_cast<int>(rng() % n)] += 1;
        long c = static_cast<long>(rng() % 7) - 3;
        if (c == 0) c = 1;
        f.add_term(std::move(e), Rational(c));
    }
    return f;
}

int cmd_check(const std::string& input)
{
    PoissonStructure ps = poisson_from_json(load_json_file(input));
    auto residual = jacobi_residual(ps);
    for (int i = 0; i < ps.n; ++i)
        for (int j = i + 1; j < ps.n; ++j)
            for (int k = j + 1; k < ps.n; ++k) {
                auto it = residual.find({i, j, k});
                std::cout << "jacobi (" << i + 1 << "," << j + 1 << "," << k + 1
                          << "): "
                          << (it == residual.end() ? "0" : it->second.to_string())
                          << "\n";
            }
    if (residual.empty()) {
        std::cout << "jacobi identity holds\n";
        return 0;
    }
    std::cout << "jacobi identity fails at " << residual.size() << " triple(s)\n";
    return 1;
}

int cmd_build(const std::string& input, int order, const std::string& gauge,
              const std::string& out, int jobs)
{
    if (gauge != "zero")
        throw std::invalid_argument("unsupported gauge '" + gauge +
                                    "' (only \"zero\" is available)");
    PoissonStructure ps = poisson_from_json(load_json_file(input));
    StarProduct s = build(ps, order, {}, jobs);
    write_output(star_to_json(s), out);
    return 0;
}

int cmd_star(const std::string& input, int order, const std::string& fexpr,
             const std::string& gexpr, int jobs)
{
    PoissonStructure ps = poisson_from_json(load_json_file(input));
    Poly f = parse_poly(fexpr, ps.n);
    Poly g = parse_poly(gexpr, ps.n);
    StarProduct s = build(ps, order, {}, jobs);
    std::vector<Poly> orders = star_eval(s, f, g);
    for (std::size_t k = 0; k < orders.size(); ++k)
        std::cout << "t^" << k << ": " << orders[k].to_string() << "\n";
    return 0;
}

int cmd_assoc(const std::string& input, int order, int trials, unsigned long long seed,
              int max_degree, int jobs)
{
    Json doc = load_json_file(input);
    StarProduct s;
    if (doc.is_object() && doc.contains("pi")) {
        s = star_from_json(doc); // a star-product dump carries its own order
    } else {
        PoissonStructure ps = poisson_from_json(doc);
        s = build(ps, order, {}, jobs);
    }
    std::cout << "order=" << s.order << " trials=" << trials << " seed=" << seed
              << " max-degree=" << max_degree << "\n";
    std::mt19937_64 rng(seed);
    bool ok = true;
    int max_bad_order = -1;
    for (int t = 0; t < trials; ++t) {
        Poly f = random_poly(rng, s.structure.n, max_degree);
        Poly g = random_poly(rng, s.structure.n, max_degree);
        Poly h = random_poly(rng, s.structure.n, max_degree);
        std::vector<Poly> res = associator(s, f, g, h);
        for (std::size_t r = 0; r < res.size(); ++r)
            if (!res[r].is_zero()) {
                std::cout << "trial " << t << ": nonzero associator at order " << r
                          << ": " << res[r].to_string() << "\n";
                max_bad_order = std::max(max_bad_order, static_cast<int>(r));
                ok = false;
            }
    }
    if (!ok) {
        std::cout << "associativity fails, max nonzero order " << max_bad_order << "\n";
        return 1;
    }
    std::cout << "all associators vanish through order " << s.order << "\n";
    return 0;
}

int cmd_block(int p, const std::string& degree_str, bool tilde, bool want_pinv,
              const std::string& out)
{
    std::vector<int> comps;
    std::size_t pos = 0;
    while (pos <= degree_str.size()) {
        std::size_t next = degree_str.find(',', pos);
        std::string piece = degree_str.substr(
            pos, next == std::string::npos ? std::string::npos : next - pos);
        try {
            std::size_t used = 0;
            int v = std::stoi(piece, &used);
            if (used != piece.size() || v < 0) throw std::invalid_argument(piece);
            comps.push_back(v);
        } catch (const std::exception&) {
            throw std::invalid_argument("bad --degree component '" + piece +
                                        "' (expected nonnegative integers)");
        }
        if (next == std::string::npos) break;
        pos = next + 1;
    }
    MultiIndex l{std::move(comps)};

    BlockMatrix delta = coboundary_matrix(p, l, tilde);
    Json doc;
    doc["delta"] = matrix_to_json(delta, p, l, tilde);
    if (want_pinv) doc["pinv"] = matrix_to_json(pinv(delta), p, l, tilde);
    Projectors pr = projectors(p, l, tilde);
    Json ranks;
    ranks["delta"] = rank(delta);
    ranks["ker"] = rank(pr.ker);
    ranks["ker_perp"] = rank(pr.ker_perp);
    ranks["im"] = rank(pr.im);
    ranks["harmonic"] = rank(pr.harmonic);
    doc["ranks"] = std::move(ranks);
    doc["cohomology_dim"] = cohomology_dim(p, l, tilde);
    write_output(doc, out);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exact star products for polynomial Poisson structures on R^n"};
    app.require_subcommand(1);

    std::string input, out, gauge = "zero", fexpr, gexpr, degree_str;
    int order = 2, trials = 20, max_degree = 3, p = 2, jobs = 1;
    unsigned long long seed = 0;
    bool allow_large = false, tilde = false, want_pinv = false;

    auto add_order = [&](CLI::App* cmd) {
        cmd->add_option("--order", order, "truncation order K")->capture_default_str();
        cmd->add_flag("--allow-large-order", allow_large, "lift the K <= 4 guard");
    };
    auto add_jobs = [&](CLI::App* cmd) {
        cmd->add_option("--jobs", jobs, "parallel block solves")
            ->check(CLI::PositiveNumber);
    };

    CLI::App* check = app.add_subcommand("check", "verify the Jacobi identity");
    check->add_option("input", input, "Poisson structure JSON file")->required();

    CLI::App* build_cmd =
        app.add_subcommand("build", "solve the associativity equations up to order K");
    build_cmd->add_option("input", input, "Poisson structure JSON file")->required();
    add_order(build_cmd);
    build_cmd->add_option("--gauge", gauge, "cocycle choice per order")
        ->capture_default_str();
    build_cmd->add_option("--out", out, "output file (default: stdout)");
    add_jobs(build_cmd);

    CLI::App* star_cmd = app.add_subcommand("star", "evaluate f*g order by order");
    star_cmd->add_option("input", input, "Poisson structure JSON file")->required();
    add_order(star_cmd);
    star_cmd->add_option("--f", fexpr, "left factor, e.g. \"x1^2 - 2*x2\"")->required();
    star_cmd->add_option("--g", gexpr, "right factor")->required();
    add_jobs(star_cmd);

    CLI::App* assoc_cmd =
        app.add_subcommand("assoc", "test associativity on random polynomial triples");
    assoc_cmd->add_option("input", input, "Poisson structure or star-product JSON file")
        ->required();
    add_order(assoc_cmd);
    assoc_cmd->add_option("--trials", trials, "number of random triples")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    assoc_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
    assoc_cmd->add_option("--max-degree", max_degree, "degree bound for random factors")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    add_jobs(assoc_cmd);

    CLI::App* block_cmd =
        app.add_subcommand("block", "dump one degree block of the coboundary");
    block_cmd->add_option("--p", p, "cochain arity of the source")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    block_cmd->add_option("--degree", degree_str, "block degree, e.g. \"1,1,1\"")
        ->required();
    block_cmd->add_flag("--tilde", tilde, "restrict to the no-zero-slot subcomplex");
    block_cmd->add_flag("--pinv", want_pinv, "also dump the exact pseudoinverse");
    block_cmd->add_option("--out", out, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (check->parsed()) return cmd_check(input);
        if (build_cmd->parsed())
            return cmd_build(input, guard_order(order, allow_large), gauge, out, jobs);
        if (star_cmd->parsed())
            return cmd_star(input, guard_order(order, allow_large), fexpr, gexpr, jobs);
        if (assoc_cmd->parsed())
            return cmd_assoc(input, guard_order(order, allow_large), trials, seed,
                             max_degree, jobs);
        if (block_cmd->parsed()) return cmd_block(p, degree_str, tilde, want_pinv, out);
        return 3;
    } catch (const ObstructionError& e) {
        std::cerr << "obstruction: " << e.what() << "\n";
        auto basis = BlockBasis::make(3, e.degree(), true);
        if (basis->size() == static_cast<int>(e.residual().size()))
            for (int i = 0; i < basis->size(); ++i)
                if (!e.residual()[i].is_zero())
                    std::cerr << "  residual at " << key_string(basis->tuples[i]) << ": "
                              << e.residual()[i].to_string() << "\n";
        return 2;
    } catch (const InvalidPoissonError& e) {
        std::cerr << "invalid Poisson structure: " << e.what() << "\n";
        for (const auto& [t, r] : e.residual())
            std::cerr << "  jacobi (" << t[0] + 1 << "," << t[1] + 1 << "," << t[2] + 1
                      << "): " << r.to_string() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "expression error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
