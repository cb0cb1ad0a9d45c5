#pragma once

#include <iosfwd>
#include <string>

#include "kld/family.hpp"
#include "kld/hypergraph.hpp"
#include "kld/walk.hpp"

namespace kld {

// Family files:      "kld <k> <ell> <d>", then one tuple per line.
// Hypergraph files:  "hg <n> <k> [<d>]", optional "parts <s1> ... <sd>",
//                    then one sorted edge per line.
// Walk files:        "walk <kind> <length> [missing=<idx>]", then the sequence.
// Blank lines and anything after '#' are ignored. Parse errors are DataError
// and name the offending line.

void write_family(std::ostream& out, const TypeFamily& f);
TypeFamily read_family(std::istream& in);

void write_hypergraph(std::ostream& out, const Hypergraph& h);
Hypergraph read_hypergraph(std::istream& in);

struct WalkFile {
    WalkCertificate walk;
    int length = 0;  // as declared in the header
};

void write_walk(std::ostream& out, const WalkCertificate& w, int k);
WalkFile read_walk(std::istream& in);

TypeFamily load_family(const std::string& path);
Hypergraph load_hypergraph(const std::string& path);
WalkFile load_walk(const std::string& path);

void save_family(const std::string& path, const TypeFamily& f);
void save_hypergraph(const std::string& path, const Hypergraph& h);
void save_walk(const std::string& path, const WalkCertificate& w, int k);

}  // namespace kld
