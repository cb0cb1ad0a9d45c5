#include "kld/search.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "kld/errors.hpp"

namespace kld {

std::string to_string(SearchMode mode) { return mode == SearchMode::Enumerate ? "enumerate" : "exists"; }

std::string to_string(SearchStatus status) { return status == SearchStatus::Complete ? "complete" : "incomplete"; }

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr char kUndecided = 0;
constexpr char kIn = 1;
constexpr char kOut = 2;

// Static data about the lattice T_d^k: who covers which (k-1)-tuple, who is
// adjacent to whom, and every index sum.
struct Problem {
    int k = 0;
    int ell = 0;
    int d = 0;
    int q = 0;
    TypeList types;
    std::vector<std::vector<int>> down;   // ranks of the (k-1)-tuples below each type
    std::vector<std::vector<int>> cover;  // types above each (k-1)-tuple
    std::vector<std::vector<int>> nbr;
    std::vector<std::vector<int>> sums;  // sums[i][s] over index set s
    std::vector<std::uint64_t> valid;    // index sets whose sum q does not divide

    Problem(int k_, int ell_, int d_) : k(k_), ell(ell_), d(d_) {
        if (d < 2 || d > 6) throw ParameterError("search supports 2 <= d <= 6");
        if (k < 2) throw ParameterError("search needs k >= 2");
        q = derived_parameters(k, ell).q;
        TypeIndex index(k, d);
        types = index.types();
        RankTable ranks(k, d);
        const auto sets = index_sets_in_order(d);
        const int n = static_cast<int>(types.size());
        down.resize(static_cast<size_t>(n));
        nbr.resize(static_cast<size_t>(n));
        sums.resize(static_cast<size_t>(n));
        valid.assign(static_cast<size_t>(n), 0);
        cover.resize(static_cast<size_t>(ranks.count(k - 1)));
        for (int i = 0; i < n; ++i) {
            TypeTuple y = types[static_cast<size_t>(i)];
            for (int j = 0; j < d; ++j) {
                if (y[j] == 0) continue;
                --y[j];
                int r = static_cast<int>(ranks.rank(y));
                down[static_cast<size_t>(i)].push_back(r);
                cover[static_cast<size_t>(r)].push_back(i);
                ++y[j];
            }
            for (const auto& z : lattice_neighbors(types[static_cast<size_t>(i)]))
                nbr[static_cast<size_t>(i)].push_back(index.find(z));
            for (size_t s = 0; s < sets.size(); ++s) {
                int v = index_sum(types[static_cast<size_t>(i)], sets[s]);
                sums[static_cast<size_t>(i)].push_back(v);
                if (v % q != 0) valid[static_cast<size_t>(i)] |= std::uint64_t{1} << s;
            }
        }
    }

    int size() const { return static_cast<int>(types.size()); }
};

// Partial assignment with undo. Included tuples are joined in a union-find
// whose roots carry the index sets still constant (and not divisible by q)
// across the whole component.
class Solver {
public:
    Solver(const Problem& p, const PruneOptions& o) : p_(p), o_(o) {
        const size_t n = static_cast<size_t>(p.size());
        val_.assign(n, kUndecided);
        parent_.resize(n);
        size_.assign(n, 1);
        mask_ = p.valid;
        for (size_t i = 0; i < n; ++i) parent_[i] = static_cast<int>(i);
        cnt_.resize(p.cover.size());
        for (size_t y = 0; y < p.cover.size(); ++y) cnt_[y] = static_cast<int>(p.cover[y].size());
    }

    struct Mark {
        size_t trail;
        size_t unions;
    };

    Mark mark() const { return {trail_.size(), unions_.size()}; }

    void undo(Mark m) {
        while (trail_.size() > m.trail) {
            int i = trail_.back();
            trail_.pop_back();
            if (val_[static_cast<size_t>(i)] == kOut)
                for (int y : p_.down[static_cast<size_t>(i)]) ++cnt_[static_cast<size_t>(y)];
            val_[static_cast<size_t>(i)] = kUndecided;
        }
        while (unions_.size() > m.unions) {
            const Union& u = unions_.back();
            parent_[static_cast<size_t>(u.child)] = u.child;
            size_[static_cast<size_t>(u.root)] = u.old_size;
            mask_[static_cast<size_t>(u.root)] = u.old_mask;
            unions_.pop_back();
        }
        pending_.clear();
    }

    bool assign(int i, char v) { return v == kIn ? include(i) : exclude(i); }

    bool include(int i) {
        val_[static_cast<size_t>(i)] = kIn;
        trail_.push_back(i);
        for (int j : p_.nbr[static_cast<size_t>(i)])
            if (val_[static_cast<size_t>(j)] == kIn) unite(i, j);
        return !(o_.partial_components && mask_[static_cast<size_t>(find(i))] == 0);
    }

    bool exclude(int i) {
        val_[static_cast<size_t>(i)] = kOut;
        trail_.push_back(i);
        bool ok = true;
        for (int y : p_.down[static_cast<size_t>(i)]) {
            int c = --cnt_[static_cast<size_t>(y)];
            if (c == 0 && o_.p1) ok = false;
            if (c == 1) pending_.push_back(y);
        }
        return ok;
    }

    // Applies forced decisions until nothing changes.
    bool propagate() {
        if (!o_.propagate) {
            pending_.clear();
            return true;
        }
        bool changed = true;
        while (changed) {
            changed = false;
            if (o_.p1) {
                while (!pending_.empty()) {
                    int y = pending_.back();
                    pending_.pop_back();
                    if (cnt_[static_cast<size_t>(y)] != 1) continue;
                    for (int c : p_.cover[static_cast<size_t>(y)]) {
                        if (val_[static_cast<size_t>(c)] != kUndecided) continue;
                        if (!include(c)) return false;
                        changed = true;
                        break;
                    }
                }
            }
            pending_.clear();
            if (o_.partial_components) {
                for (int z = 0; z < p_.size(); ++z) {
                    if (val_[static_cast<size_t>(z)] != kUndecided) continue;
                    if (joined_mask(z) != 0) continue;
                    if (!exclude(z)) return false;
                    changed = true;
                }
            }
            if (!pending_.empty()) changed = true;
        }
        return true;
    }

    // A component with no undecided neighbour cannot grow any more.
    bool closed_components_ok() const {
        if (!o_.complete_components || o_.partial_components) return true;
        std::vector<char> open(val_.size(), 0);
        for (int i = 0; i < p_.size(); ++i) {
            if (val_[static_cast<size_t>(i)] != kIn) continue;
            for (int j : p_.nbr[static_cast<size_t>(i)])
                if (val_[static_cast<size_t>(j)] == kUndecided) open[static_cast<size_t>(find(i))] = 1;
        }
        for (int i = 0; i < p_.size(); ++i) {
            if (val_[static_cast<size_t>(i)] != kIn) continue;
            int r = find(i);
            if (!open[static_cast<size_t>(r)] && mask_[static_cast<size_t>(r)] == 0) return false;
        }
        return true;
    }

    int first_undecided() const {
        for (int i = 0; i < p_.size(); ++i)
            if (val_[static_cast<size_t>(i)] == kUndecided) return i;
        return -1;
    }

    TypeFamily family() const {
        TypeFamily f{p_.k, p_.ell, p_.d, {}};
        for (int i = 0; i < p_.size(); ++i)
            if (val_[static_cast<size_t>(i)] == kIn) f.types.push_back(p_.types[static_cast<size_t>(i)]);
        return f;
    }

private:
    struct Union {
        int child;
        int root;
        int old_size;
        std::uint64_t old_mask;
    };

    int find(int i) const {
        while (parent_[static_cast<size_t>(i)] != i) i = parent_[static_cast<size_t>(i)];
        return i;
    }

    std::uint64_t equal_sums(int a, int b) const {
        const auto& x = p_.sums[static_cast<size_t>(a)];
        const auto& y = p_.sums[static_cast<size_t>(b)];
        std::uint64_t m = 0;
        for (size_t s = 0; s < x.size(); ++s)
            if (x[s] == y[s]) m |= std::uint64_t{1} << s;
        return m;
    }

    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[static_cast<size_t>(a)] < size_[static_cast<size_t>(b)]) std::swap(a, b);
        unions_.push_back({b, a, size_[static_cast<size_t>(a)], mask_[static_cast<size_t>(a)]});
        std::uint64_t m = mask_[static_cast<size_t>(a)] & mask_[static_cast<size_t>(b)] & equal_sums(a, b);
        parent_[static_cast<size_t>(b)] = a;
        size_[static_cast<size_t>(a)] += size_[static_cast<size_t>(b)];
        mask_[static_cast<size_t>(a)] = m;
    }

    // Index sets that would survive if z were included now.
    std::uint64_t joined_mask(int z) const {
        std::uint64_t m = p_.valid[static_cast<size_t>(z)];
        for (int j : p_.nbr[static_cast<size_t>(z)]) {
            if (val_[static_cast<size_t>(j)] != kIn) continue;
            int r = find(j);
            m &= mask_[static_cast<size_t>(r)] & equal_sums(z, r);
            if (m == 0) break;
        }
        return m;
    }

    const Problem& p_;
    PruneOptions o_;
    std::vector<char> val_;
    std::vector<int> cnt_;
    std::vector<int> trail_;
    std::vector<int> pending_;
    std::vector<int> parent_;
    std::vector<int> size_;
    std::vector<std::uint64_t> mask_;
    std::vector<Union> unions_;
};

using Prefix = std::string;  // '1' = include branch, '0' = exclude branch

struct Task {
    Prefix prefix;
    bool done = false;
    std::uint64_t count = 0;
    std::uint64_t nodes = 0;
    bool found = false;
};

struct Shared {
    SearchMode mode;
    SearchBudget budget;
    Clock::time_point start;
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> out_of_budget{false};
    std::atomic<std::size_t> best_found{std::numeric_limits<std::size_t>::max()};
};

enum class Outcome { Done, Found, Stopped };

class Walker {
public:
    Walker(const Problem& p, Solver s, Shared& sh, std::size_t keep)
        : p_(p), s_(std::move(s)), sh_(sh), keep_(keep) {}

    std::uint64_t count = 0;
    std::uint64_t nodes = 0;
    std::optional<TypeFamily> example;
    std::vector<TypeFamily> families;

    Outcome run(std::size_t task_index) {
        task_ = task_index;
        return dfs();
    }

    Solver& solver() { return s_; }

private:
    bool over_budget() {
        if (sh_.out_of_budget) return true;
        std::uint64_t total = ++sh_.nodes;
        if (sh_.budget.max_nodes && total > sh_.budget.max_nodes) sh_.out_of_budget = true;
        if (sh_.budget.max_seconds > 0 && (total & 1023) == 0 && seconds_since(sh_.start) > sh_.budget.max_seconds)
            sh_.out_of_budget = true;
        return sh_.out_of_budget;
    }

    Outcome dfs() {
        ++nodes;
        if (over_budget()) return Outcome::Stopped;
        if (sh_.mode == SearchMode::Exists && sh_.best_found < task_) return Outcome::Stopped;
        if (!s_.closed_components_ok()) return Outcome::Done;
        int b = s_.first_undecided();
        if (b < 0) {
            TypeFamily f = s_.family();
            if (!verify_family(f).pass()) return Outcome::Done;
            ++count;
            if (sh_.mode == SearchMode::Exists) {
                example = std::move(f);
                return Outcome::Found;
            }
            if (families.size() < keep_) families.push_back(std::move(f));
            return Outcome::Done;
        }
        for (char v : {kIn, kOut}) {
            auto m = s_.mark();
            if (s_.assign(b, v) && s_.propagate()) {
                Outcome r = dfs();
                if (r != Outcome::Done) {
                    s_.undo(m);
                    return r;
                }
            }
            s_.undo(m);
        }
        return Outcome::Done;
    }

    const Problem& p_;
    Solver s_;
    Shared& sh_;
    std::size_t keep_;
    std::size_t task_ = 0;
};

void collect_prefixes(Solver& s, Prefix& prefix, int depth, std::vector<Prefix>& out, std::uint64_t& nodes) {
    ++nodes;
    if (!s.closed_components_ok()) return;
    int b = s.first_undecided();
    if (depth == 0 || b < 0) {
        out.push_back(prefix);
        return;
    }
    for (char v : {kIn, kOut}) {
        auto m = s.mark();
        if (s.assign(b, v) && s.propagate()) {
            prefix.push_back(v == kIn ? '1' : '0');
            collect_prefixes(s, prefix, depth - 1, out, nodes);
            prefix.pop_back();
        }
        s.undo(m);
    }
}

void replay(Solver& s, const Prefix& prefix) {
    for (char c : prefix) {
        int b = s.first_undecided();
        if (b < 0 || !s.assign(b, c == '1' ? kIn : kOut) || !s.propagate())
            throw DataError("checkpoint task prefix does not replay");
    }
}

std::string header_line(const Problem& p, SearchMode mode, int depth) {
    std::ostringstream os;
    os << "k " << p.k << " ell " << p.ell << " d " << p.d << " mode " << to_string(mode) << " depth " << depth;
    return os.str();
}

constexpr const char* kCheckpointMagic = "kld-search-checkpoint 1";

void write_checkpoint(const std::string& path, const std::string& header, const std::vector<Task>& tasks) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw DataError("cannot write checkpoint " + path);
        out << kCheckpointMagic << "\n" << header << "\n" << "tasks " << tasks.size() << "\n";
        for (size_t i = 0; i < tasks.size(); ++i) {
            const Task& t = tasks[i];
            out << i << ' ' << t.done << ' ' << t.count << ' ' << t.nodes << ' ' << t.found << ' '
                << (t.prefix.empty() ? "-" : t.prefix) << "\n";
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) throw DataError("cannot replace checkpoint " + path);
}

std::optional<std::vector<Task>> read_checkpoint(const std::string& path, const std::string& header) {
    std::ifstream in(path);
    if (!in) return std::nullopt;
    std::string line;
    if (!std::getline(in, line) || line != kCheckpointMagic) throw DataError("not a search checkpoint: " + path);
    if (!std::getline(in, line) || line != header)
        throw DataError("checkpoint was written for different parameters: " + line);
    std::string word;
    std::size_t n = 0;
    if (!(in >> word >> n) || word != "tasks") throw DataError("checkpoint has no task count");
    std::vector<Task> tasks(n);
    for (size_t i = 0; i < n; ++i) {
        size_t idx;
        int done, found;
        std::string prefix;
        Task& t = tasks[i];
        if (!(in >> idx >> done >> t.count >> t.nodes >> found >> prefix) || idx != i)
            throw DataError("checkpoint task line " + std::to_string(i) + " is malformed");
        t.done = done != 0;
        t.found = found != 0;
        t.prefix = prefix == "-" ? "" : prefix;
    }
    return tasks;
}

SearchResult run_search(int k, int ell, int d, SearchMode mode, const SearchOptions& opt) {
    const auto start = Clock::now();
    Problem problem(k, ell, d);
    if (opt.workers < 1) throw ParameterError("need at least one worker");

    Solver root(problem, opt.prune);
    SearchResult result;
    result.mode = mode;

    bool root_ok = root.propagate();
    int depth = opt.split_depth;
    if (depth < 0) depth = (opt.workers > 1 || !opt.checkpoint_path.empty()) ? 12 : 0;
    const std::string header = header_line(problem, mode, depth);

    std::vector<Task> tasks;
    std::uint64_t setup_nodes = 0;
    if (opt.resume && !opt.checkpoint_path.empty()) {
        if (auto loaded = read_checkpoint(opt.checkpoint_path, header)) tasks = std::move(*loaded);
    }
    if (tasks.empty() && root_ok) {
        std::vector<Prefix> prefixes;
        Prefix p;
        Solver s = root;
        collect_prefixes(s, p, depth, prefixes, setup_nodes);
        for (auto& pr : prefixes) tasks.push_back(Task{std::move(pr)});
    }

    Shared shared{mode, opt.budget, start};
    shared.nodes = setup_nodes;
    std::mutex mu;
    auto last_save = Clock::now();
    std::vector<std::optional<TypeFamily>> examples(tasks.size());
    std::vector<std::vector<TypeFamily>> kept(tasks.size());

    for (size_t i = 0; i < tasks.size(); ++i)
        if (tasks[i].done && tasks[i].found) shared.best_found = std::min<std::size_t>(shared.best_found, i);

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t i = next++;
            if (i >= tasks.size() || shared.out_of_budget) return;
            if (tasks[i].done) {
                // A finished task that found something is re-run to recover its
                // family; every other finished task is skipped.
                if (!(mode == SearchMode::Exists && tasks[i].found && i == shared.best_found)) continue;
            }
            if (mode == SearchMode::Exists && shared.best_found < i) continue;
            Solver s = root;
            replay(s, tasks[i].prefix);
            Walker w(problem, std::move(s), shared, opt.keep_families);
            Outcome r = w.run(i);
            std::lock_guard<std::mutex> lock(mu);
            if (r == Outcome::Stopped) continue;
            if (!tasks[i].done) {
                tasks[i].count = w.count;
                tasks[i].nodes = w.nodes;
            }
            tasks[i].done = true;
            tasks[i].found = r == Outcome::Found;
            examples[i] = std::move(w.example);
            kept[i] = std::move(w.families);
            if (r == Outcome::Found) {
                size_t cur = shared.best_found;
                while (i < cur && !shared.best_found.compare_exchange_weak(cur, i)) {}
            }
            if (!opt.checkpoint_path.empty() && seconds_since(last_save) > 5) {
                write_checkpoint(opt.checkpoint_path, header, tasks);
                last_save = Clock::now();
            }
        }
    };
    if (opt.workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < opt.workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (!opt.checkpoint_path.empty()) write_checkpoint(opt.checkpoint_path, header, tasks);

    result.tasks_total = tasks.size();
    for (size_t i = 0; i < tasks.size(); ++i) {
        if (!tasks[i].done) continue;
        ++result.tasks_done;
        result.explored_nodes += tasks[i].nodes;
        if (mode == SearchMode::Enumerate) {
            result.count += tasks[i].count;
            for (auto& f : kept[i])
                if (result.families.size() < opt.keep_families) result.families.push_back(std::move(f));
        }
    }
    result.explored_nodes = std::max<std::uint64_t>(result.explored_nodes + setup_nodes, shared.nodes.load());

    bool all_done = result.tasks_done == tasks.size();
    if (mode == SearchMode::Exists) {
        size_t best = shared.best_found;
        if (best < tasks.size() && examples[best]) {
            result.example = examples[best];
            result.count = 1;
            all_done = true;
        }
    }
    result.status = all_done ? SearchStatus::Complete : SearchStatus::Incomplete;
    result.elapsed_seconds = seconds_since(start);
    return result;
}

}  // namespace

SearchResult brute_force_enumerate(int k, int ell, int d, std::size_t keep_families) {
    const auto start = Clock::now();
    derived_parameters(k, ell);
    if (lattice_size(k, d) > 25) throw CapacityError("brute force is limited to lattices of at most 25 points");
    const TypeList all = enumerate_types(k, d);
    const size_t n = all.size();
    SearchResult r;
    TypeFamily f{k, ell, d, {}};
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        f.types.clear();
        for (size_t i = 0; i < n; ++i)
            if (mask >> i & 1) f.types.push_back(all[i]);
        ++r.explored_nodes;
        if (!verify_family(f).pass()) continue;
        ++r.count;
        if (r.families.size() < keep_families) r.families.push_back(f);
    }
    r.elapsed_seconds = seconds_since(start);
    return r;
}

SearchResult dfs_enumerate(int k, int ell, int d, const SearchOptions& options) {
    return run_search(k, ell, d, SearchMode::Enumerate, options);
}

SearchResult dfs_exists(int k, int ell, int d, const SearchOptions& options) {
    return run_search(k, ell, d, SearchMode::Exists, options);
}

}  // namespace kld
