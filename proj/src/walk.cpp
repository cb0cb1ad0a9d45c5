#include "kld/walk.hpp"

#include <algorithm>

#include "kld/errors.hpp"

namespace kld {

std::string to_string(WalkKind kind) {
    switch (kind) {
        case WalkKind::OpenWalk:
            return "open-walk";
        case WalkKind::Cycle:
            return "cycle";
        case WalkKind::CycleMinus:
            return "cycle-minus";
    }
    return "?";
}

WalkKind parse_walk_kind(const std::string& s) {
    if (s == "open-walk") return WalkKind::OpenWalk;
    if (s == "cycle") return WalkKind::Cycle;
    if (s == "cycle-minus") return WalkKind::CycleMinus;
    throw DataError("unknown walk kind '" + s + "'");
}

int WalkCertificate::length(int k) const {
    int n = static_cast<int>(sequence.size());
    return kind == WalkKind::OpenWalk ? n - k : n;
}

std::vector<int> window_at(const std::vector<int>& seq, int start, int k, bool cyclic) {
    std::vector<int> w(static_cast<size_t>(k));
    const int n = static_cast<int>(seq.size());
    for (int i = 0; i < k; ++i) {
        int p = start + i;
        if (cyclic) p %= n;
        w[static_cast<size_t>(i)] = seq[static_cast<size_t>(p)];
    }
    return w;
}

std::vector<int> rotate_cyclic(const std::vector<int>& seq, int start) {
    std::vector<int> out(seq.begin() + start, seq.end());
    out.insert(out.end(), seq.begin(), seq.begin() + start);
    return out;
}

WalkCheck validate_walk(const WalkCertificate& w, int k, const WindowPredicate& window_ok) {
    const int n = static_cast<int>(w.sequence.size());
    if (k < 1) return {false, "uniformity must be positive"};
    if (w.kind == WalkKind::OpenWalk) {
        if (n < k) return {false, "open walk shorter than one window"};
        if (w.missing_window) return {false, "open walk cannot have a missing window"};
        for (int i = 0; i + k <= n; ++i)
            if (!window_ok(window_at(w.sequence, i, k, false)))
                return {false, "window " + std::to_string(i + 1) + " is not an edge"};
        return {true, ""};
    }
    if (n <= k) return {false, "cycle length must exceed k"};
    if (w.kind == WalkKind::Cycle && w.missing_window) return {false, "cycle cannot have a missing window"};
    if (w.missing_window && (*w.missing_window < 1 || *w.missing_window > n))
        return {false, "missing window index out of range"};
    for (int i = 0; i < n; ++i) {
        if (w.missing_window && *w.missing_window == i + 1) continue;
        if (!window_ok(window_at(w.sequence, i, k, true)))
            return {false, "window " + std::to_string(i + 1) + " is not an edge"};
    }
    return {true, ""};
}

}  // namespace kld
