#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kld {

enum class WalkKind { OpenWalk, Cycle, CycleMinus };

std::string to_string(WalkKind kind);
WalkKind parse_walk_kind(const std::string& s);

// A vertex (or label) sequence witnessing a walk or a homomorphic tight cycle.
// For an open walk of length t the sequence has t + k entries; for the two
// cyclic kinds it has exactly ell entries and windows wrap around.
struct WalkCertificate {
    std::vector<int> sequence;
    WalkKind kind = WalkKind::OpenWalk;
    std::optional<int> missing_window;  // 1-based, cycle-minus only

    int length(int k) const;
    bool operator==(const WalkCertificate&) const = default;
};

struct WalkCheck {
    bool ok = false;
    std::string reason;
    explicit operator bool() const { return ok; }
};

// The window predicate receives the k entries of a window in sequence order.
using WindowPredicate = std::function<bool(const std::vector<int>&)>;

// Window-by-window check shared by every producer of certificates.
WalkCheck validate_walk(const WalkCertificate& w, int k, const WindowPredicate& window_ok);

// The i-th window (0-based) of a sequence, wrapping when cyclic is set.
std::vector<int> window_at(const std::vector<int>& seq, int start, int k, bool cyclic);

// Rotate a cyclic sequence so that position `start` comes first.
std::vector<int> rotate_cyclic(const std::vector<int>& seq, int start);

}  // namespace kld
