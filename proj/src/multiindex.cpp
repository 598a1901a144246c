#include "starq/multiindex.hpp"

namespace starq {

namespace {

// Advance a through the box [0, l] in lexicographic order; false when done.
bool next_in_box(MultiIndex& a, const MultiIndex& l)
{
    for (int i = a.dim() - 1; i >= 0; --i) {
        if (a[i] < l[i]) {
            ++a[i];
            for (int j = i + 1; j < a.dim(); ++j) a[j] = 0;
            return true;
        }
    }
    return false;
}

void enumerate(const MultiIndex& rest, int parts, bool nonzero_parts,
               std::vector<MultiIndex>& prefix, std::vector<std::vector<MultiIndex>>& out)
{
    if (parts == 1) {
        if (nonzero_parts && rest.is_zero()) return;
        prefix.push_back(rest);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    // Remaining order must cover the remaining nonzero parts.
    if (nonzero_parts && rest.order() < parts) return;
    MultiIndex a(rest.dim());
    do {
        if (nonzero_parts && a.is_zero()) continue;
        prefix.push_back(a);
        enumerate(rest - a, parts - 1, nonzero_parts, prefix, out);
        prefix.pop_back();
    } while (next_in_box(a, rest));
}

} // namespace

std::vector<std::vector<MultiIndex>> compositions(const MultiIndex& l, int p, bool nonzero_parts)
{
    if (p < 1) throw std::invalid_argument("compositions: p must be >= 1");
    std::vector<std::vector<MultiIndex>> out;
    std::vector<MultiIndex> prefix;
    enumerate(l, p, nonzero_parts, prefix, out);
    return out;
}

} // namespace starq
