#include "kld/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "kld/errors.hpp"

namespace kld {

namespace {

// Yields the meaningful lines of a file along with their line numbers.
class LineReader {
public:
    explicit LineReader(std::istream& in) : in_(in) {}

    bool next(std::vector<std::string>& words) {
        std::string line;
        while (std::getline(in_, line)) {
            ++number_;
            if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            std::istringstream ss(line);
            words.clear();
            for (std::string w; ss >> w;) words.push_back(w);
            if (!words.empty()) return true;
        }
        return false;
    }

    int number() const { return number_; }

    [[noreturn]] void fail(const std::string& what) const {
        throw DataError("line " + std::to_string(number_) + ": " + what);
    }

    int integer(const std::string& word) const {
        try {
            size_t used = 0;
            int v = std::stoi(word, &used);
            if (used != word.size()) fail("'" + word + "' is not an integer");
            return v;
        } catch (const std::logic_error&) {
            fail("'" + word + "' is not an integer");
        }
    }

    std::vector<int> integers(const std::vector<std::string>& words, size_t from = 0) const {
        std::vector<int> out;
        for (size_t i = from; i < words.size(); ++i) out.push_back(integer(words[i]));
        return out;
    }

private:
    std::istream& in_;
    int number_ = 0;
};

void join(std::ostream& out, const std::vector<int>& v) {
    for (size_t i = 0; i < v.size(); ++i) out << (i ? " " : "") << v[i];
    out << "\n";
}

template <class F>
auto with_input(const std::string& path, F read) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    try {
        return read(in);
    } catch (const DataError& e) {
        throw DataError(path + ": " + e.what());
    }
}

template <class F>
void with_output(const std::string& path, F write) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path);
    write(out);
}

}  // namespace

void write_family(std::ostream& out, const TypeFamily& f) {
    out << "kld " << f.k << ' ' << f.ell << ' ' << f.d << "\n";
    for (const auto& x : f.types) join(out, x.coords);
}

TypeFamily read_family(std::istream& in) {
    LineReader r(in);
    std::vector<std::string> words;
    if (!r.next(words)) throw DataError("empty family file");
    if (words.size() != 4 || words[0] != "kld") r.fail("expected 'kld <k> <ell> <d>'");
    const int k = r.integer(words[1]);
    const int ell = r.integer(words[2]);
    const int d = r.integer(words[3]);
    if (k < 1 || d < 1) r.fail("k and d must be positive");
    TypeList types;
    while (r.next(words)) {
        if (static_cast<int>(words.size()) != d) r.fail("expected " + std::to_string(d) + " coordinates");
        TypeTuple x(r.integers(words));
        int total = 0;
        for (int c : x.coords) {
            if (c < 0) r.fail("negative coordinate");
            total += c;
        }
        if (total != k) r.fail("coordinates sum to " + std::to_string(total) + ", not " + std::to_string(k));
        types.push_back(std::move(x));
    }
    return make_family(k, ell, d, std::move(types));
}

void write_hypergraph(std::ostream& out, const Hypergraph& h) {
    out << "hg " << h.n() << ' ' << h.k();
    if (h.has_partition()) out << ' ' << h.d();
    out << "\n";
    if (h.has_partition()) {
        out << "parts";
        for (int s : h.part_sizes()) out << ' ' << s;
        out << "\n";
    }
    for (const auto& e : h.edges()) join(out, e);
}

Hypergraph read_hypergraph(std::istream& in) {
    LineReader r(in);
    std::vector<std::string> words;
    if (!r.next(words)) throw DataError("empty hypergraph file");
    if (words.size() < 3 || words.size() > 4 || words[0] != "hg") r.fail("expected 'hg <n> <k> [<d>]'");
    const int n = r.integer(words[1]);
    const int k = r.integer(words[2]);
    const int d = words.size() == 4 ? r.integer(words[3]) : 0;
    if (n < 0 || k < 1) r.fail("need n >= 0 and k >= 1");
    std::vector<int> labels;
    std::vector<std::vector<int>> edges;
    bool first = true;
    while (r.next(words)) {
        if (first && words[0] == "parts") {
            auto sizes = r.integers(words, 1);
            if (static_cast<int>(sizes.size()) != d) r.fail("expected " + std::to_string(d) + " part sizes");
            labels.assign(1, 0);
            for (int p = 0; p < d; ++p) {
                if (sizes[static_cast<size_t>(p)] < 0) r.fail("negative part size");
                labels.insert(labels.end(), static_cast<size_t>(sizes[static_cast<size_t>(p)]), p + 1);
            }
            if (static_cast<int>(labels.size()) != n + 1) r.fail("part sizes do not add up to n");
            first = false;
            continue;
        }
        first = false;
        auto e = r.integers(words);
        if (static_cast<int>(e.size()) != k) r.fail("expected " + std::to_string(k) + " vertices");
        for (size_t i = 0; i < e.size(); ++i) {
            if (e[i] < 1 || e[i] > n) r.fail("vertex " + std::to_string(e[i]) + " out of range");
            if (i && e[i] <= e[i - 1]) r.fail("edge vertices must be strictly increasing");
        }
        edges.push_back(std::move(e));
    }
    if (d > 0 && labels.empty()) throw DataError("hypergraph declares " + std::to_string(d) + " parts but no parts line");
    const int parts = labels.empty() ? 0 : d;
    return Hypergraph(n, k, std::move(edges), std::move(labels), parts);
}

void write_walk(std::ostream& out, const WalkCertificate& w, int k) {
    out << "walk " << to_string(w.kind) << ' ' << w.length(k);
    if (w.missing_window) out << " missing=" << *w.missing_window;
    out << "\n";
    join(out, w.sequence);
}

WalkFile read_walk(std::istream& in) {
    LineReader r(in);
    std::vector<std::string> words;
    if (!r.next(words)) throw DataError("empty walk file");
    if (words.size() < 3 || words.size() > 4 || words[0] != "walk") r.fail("expected 'walk <kind> <length> [missing=<idx>]'");
    WalkFile f;
    try {
        f.walk.kind = parse_walk_kind(words[1]);
    } catch (const DataError& e) {
        r.fail(e.what());
    }
    f.length = r.integer(words[2]);
    if (words.size() == 4) {
        if (words[3].rfind("missing=", 0) != 0) r.fail("expected missing=<idx>");
        f.walk.missing_window = r.integer(words[3].substr(8));
    }
    if (!r.next(words)) throw DataError("walk file has no sequence line");
    f.walk.sequence = r.integers(words);
    if (f.walk.kind != WalkKind::OpenWalk && static_cast<int>(f.walk.sequence.size()) != f.length)
        r.fail("sequence has " + std::to_string(f.walk.sequence.size()) + " entries, header says " + std::to_string(f.length));
    if (r.next(words)) r.fail("unexpected content after the sequence");
    return f;
}

TypeFamily load_family(const std::string& path) { return with_input(path, [](std::istream& in) { return read_family(in); }); }

Hypergraph load_hypergraph(const std::string& path) {
    return with_input(path, [](std::istream& in) { return read_hypergraph(in); });
}

WalkFile load_walk(const std::string& path) { return with_input(path, [](std::istream& in) { return read_walk(in); }); }

void save_family(const std::string& path, const TypeFamily& f) {
    with_output(path, [&](std::ostream& out) { write_family(out, f); });
}

void save_hypergraph(const std::string& path, const Hypergraph& h) {
    with_output(path, [&](std::ostream& out) { write_hypergraph(out, h); });
}

void save_walk(const std::string& path, const WalkCertificate& w, int k) {
    with_output(path, [&](std::ostream& out) { write_walk(out, w, k); });
}

}  // namespace kld
