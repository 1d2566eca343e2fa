#include <cctype>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "modfus/branching.hpp"
#include "modfus/errors.hpp"
#include "modfus/lattice.hpp"
#include "modfus/mdf.hpp"
#include "modfus/modular_data.hpp"
#include "modfus/s4_dataset.hpp"
#include "modfus/verlinde.hpp"

using namespace modfus;

namespace {

enum Exit { kOk = 0, kFailed = 1, kParse = 2, kCompletion = 3, kUsage = 4 };

struct Abort {
  int code;
  std::string message;
};

std::string slurp(const std::string& path) {
  try {
    return read_text(path);
  } catch (const Error& e) {
    throw Abort{kParse, e.what()};
  }
}

DatumFile load_file(const std::string& path) {
  std::string text = slurp(path);
  try {
    return parse_file(text);
  } catch (const Error& e) {
    throw Abort{kParse, path + ": " + e.what()};
  }
}

ModularDatum to_datum(const DatumFile& f, const std::string& path) {
  try {
    return datum_from_file(f);
  } catch (const Error& e) {
    throw Abort{kParse, path + ": " + e.what()};
  }
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream o(out, std::ios::binary);
  if (!o) throw Abort{kUsage, "cannot write " + out};
  o << text;
}

void check_index(const ModularDatum& d, int i) {
  if (i < 0 || i >= d.size()) throw Abort{kUsage, "index " + std::to_string(i) + " out of range 0.." + std::to_string(d.size() - 1)};
}

// Full tensor when S is known, otherwise the known block.
FusionTensor tensor_of(const ModularDatum& d, int jobs) {
  if (d.fully_known()) return fusion_tensor(d, {}, jobs);
  FusionTensor t = known_block_tensor(d, jobs);
  std::cerr << "note: S has " << d.unknown_count() << " unknown entries; using the known block of " << t.size()
            << " modules\n";
  return t;
}

bool looks_like_mdf(const std::string& text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '[' || c == '#';
  }
  return false;
}

struct Source {
  std::optional<DatumFile> file;
  std::optional<FusionTensor> tensor;
};

Source read_source(const std::string& path) {
  std::string text = slurp(path);
  Source s;
  try {
    if (looks_like_mdf(text)) s.file = parse_file(text);
    else s.tensor = parse_triples(text);
  } catch (const Error& e) {
    throw Abort{kParse, path + ": " + e.what()};
  }
  return s;
}

FusionTensor source_tensor(const Source& s, const std::string& path, int jobs) {
  if (s.tensor) return *s.tensor;
  return tensor_of(to_datum(*s.file, path), jobs);
}

std::string range_str(const std::vector<int>& v) {
  std::string o;
  for (std::size_t a = 0; a < v.size();) {
    std::size_t b = a;
    while (b + 1 < v.size() && v[b + 1] == v[b] + 1) ++b;
    if (!o.empty()) o += ",";
    o += std::to_string(v[a]);
    if (b > a) o += "-" + std::to_string(v[b]);
    a = b + 1;
  }
  return o;
}

int cmd_validate(const std::string& path, bool json) {
  DatumFile f = load_file(path);
  ModularDatum d = to_datum(f, path);
  ValidationReport r = validate(d);
  std::cout << (json ? r.json() + "\n" : r.text());
  return r.valid() ? kOk : kFailed;
}

int cmd_complete(const std::string& path, const std::vector<std::string>& branching, const std::string& parents,
                 bool parents_given, const std::string& cross, const std::string& name, const std::string& out) {
  if (!cross.empty() && cross != "orthogonality") {
    if (cross == "eigen")
      throw Abort{kUsage, "--cross-check eigen is not available; use --cross-check orthogonality, which solves "
                          "S^2 = C on the unknown block from the partial S alone"};
    throw Abort{kUsage, "unknown cross-check '" + cross + "'"};
  }
  DatumFile f = load_file(path);
  ModularDatum d = to_datum(f, path);
  std::vector<BranchingTable> tables;
  for (const auto& b : branching) {
    auto t = branchings_from_file(load_file(b));
    tables.insert(tables.end(), t.begin(), t.end());
  }
  if (parents_given) {
    std::set<std::string> want;
    std::stringstream ss(parents);
    for (std::string p; std::getline(ss, p, ',');)
      if (!p.empty() && p != "none") want.insert(p);
    for (const auto& p : want) {
      bool found = false;
      for (const auto& t : tables) found |= t.parent == p;
      if (!found) throw Abort{kUsage, "parent '" + p + "' not found in the branching files"};
    }
    std::erase_if(tables, [&](const BranchingTable& t) { return !want.count(t.parent); });
  }
  for (int g : coverage_gaps(tables, d.size()))
    std::cerr << "note: module " << g << " occurs in no branching decomposition\n";

  std::vector<Parent> ps;
  try {
    ps = lattice_parents(tables);
    bool bad = false;
    for (const auto& [parent, t] : ps) {
      auto rows = derive_rows(parent, t, d);
      std::vector<int> ids;
      for (const auto& r : rows) ids.push_back(r.row);
      std::sort(ids.begin(), ids.end());
      ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
      auto mism = check_derived(rows, t, d);
      std::cerr << t.parent << ": derived rows " << (ids.empty() ? "none" : range_str(ids)) << ", "
                << (mism.empty() ? "all agree with the known entries" : std::to_string(mism.size()) + " mismatches")
                << "\n";
      std::set<int> cols;
      for (const auto& m : mism) {
        std::cerr << "  S(" << m.row << "," << m.col << "): derived " << m.derived.str() << ", shipped "
                  << m.shipped.str() << "  [" << m.chain;
        for (std::size_t i = 0; i < m.reads.size(); ++i) std::cerr << (i ? ", " : "; reads ") << m.reads[i];
        std::cerr << "]\n";
        cols.insert(m.col);
      }
      if (!cols.empty())
        std::cerr << "  mismatches lie in columns " << range_str({cols.begin(), cols.end()})
                  << "; check the decompositions of " << t.parent << " involving those modules\n";
      bad |= !mism.empty();
    }
    if (bad) throw Abort{kCompletion, "derived rows contradict the shipped entries"};
  } catch (const Underivable& e) {
    throw Abort{kCompletion, e.what()};
  }

  ModularDatum done;
  try {
    LinearSystem sys = assemble_system(ps, d);
    std::cerr << "system: " << sys.unknowns.size() << " unknowns, " << sys.equations.size() << " equations, "
              << sys.checks.size() << " checks on known entries\n";
    done = solve(sys, d);
  } catch (const Inconsistent& e) {
    std::cerr << "inconsistent: " << e.what() << "\ncertificate:\n";
    for (const auto& c : e.certificate) std::cerr << "  " << c << "\n";
    return kCompletion;
  } catch (const Underdetermined& e) {
    std::cerr << "underdetermined: " << e.what() << "\nfree:";
    for (const auto& u : e.free_unknowns) std::cerr << " " << u;
    std::cerr << "\n";
    return kCompletion;
  }

  if (cross == "orthogonality") {
    try {
      ModularDatum alt = complete_by_orthogonality(d);
      std::size_t differ = 0;
      for (int i = 0; i < d.size(); ++i)
        for (int j = 0; j < d.size(); ++j) differ += alt.s[i][j] != done.s[i][j];
      if (differ) {
        std::cerr << "cross-check orthogonality: " << differ << " entries differ\n";
        return kCompletion;
      }
      std::cerr << "cross-check orthogonality: agrees on all " << d.unknown_count() << " solved entries\n";
    } catch (const Error& e) {
      std::cerr << "cross-check orthogonality failed: " << e.what() << "\n";
      return kCompletion;
    }
  }

  DatumFile result = fill_unknowns(f, done, "solved");
  if (!name.empty())
    if (Section* h = result.find("header"))
      for (auto& l : h->lines)
        if (auto* r = std::get_if<HeaderRec>(&l); r && r->key == "name") r->value = name;
  emit(serialize(result), out);
  ValidationReport v = validate(done);
  if (!v.valid()) {
    std::cerr << v.text();
    return kFailed;
  }
  return kOk;
}

int cmd_fuse(const std::string& path, int i, int j) {
  ModularDatum d = to_datum(load_file(path), path);
  check_index(d, i);
  check_index(d, j);
  std::vector<int> ks;
  if (d.fully_known()) {
    for (int k = 0; k < d.size(); ++k) ks.push_back(k);
  } else {
    ks = known_rows(d);
    auto in = [&](int x) { return std::find(ks.begin(), ks.end(), x) != ks.end(); };
    if (!in(i) || !in(j)) throw Abort{kFailed, "rows " + std::to_string(i) + " and " + std::to_string(j) + " are not both known"};
    std::cerr << "note: S is partial; products restricted to the known block " << range_str(ks) << "\n";
  }
  FormalSum s;
  for (int k : ks)
    if (auto n = fusion_coeff(d, i, j, k)) s[k] = n;
  std::cout << print_sum(s) << "\n";
  return kOk;
}

int cmd_table(const std::string& path, int jobs, const std::string& out) {
  ModularDatum d = to_datum(load_file(path), path);
  emit(export_triples(tensor_of(d, jobs)), out);
  return kOk;
}

int cmd_qdim(const std::string& path, std::optional<int> i) {
  ModularDatum d = to_datum(load_file(path), path);
  std::vector<int> is;
  if (i) {
    check_index(d, *i);
    is.push_back(*i);
  } else {
    for (int k = 0; k < d.size(); ++k) is.push_back(k);
  }
  for (int k : is) {
    Cyclotomic q = qdim(d, k);
    std::cout << k << " " << q.str() << " (" << float_str(q) << ")\n";
  }
  return kOk;
}

int cmd_glob(const std::string& path) {
  ModularDatum d = to_datum(load_file(path), path);
  Cyclotomic g = glob(d);
  std::cout << g.str() << " (" << float_str(g) << ")\n";
  return kOk;
}

int cmd_lattice(int k, const std::string& out) {
  if (k < 1) throw Abort{kUsage, "--k must be positive"};
  emit(serialize(lattice_datum_file({k})), out);
  return kOk;
}

int cmd_regress(const std::string& tpath, const std::string& fpath, bool soft, bool json, int jobs) {
  Source ts = read_source(tpath);
  FusionTensor t = source_tensor(ts, tpath, jobs);
  Source fs = read_source(fpath);
  std::vector<Fixture> fx;
  if (fs.file && fs.file->find("fusion")) fx = fixtures_from_file(*fs.file);
  else fx = fixtures_from_tensor(source_tensor(fs, fpath, jobs));

  std::vector<Fixture> hard, weak;
  for (const auto& f : fx) (f.soft && !soft ? weak : hard).push_back(f);
  Comparison ch = compare_fixtures(t, hard), cw = compare_fixtures(t, weak);

  auto line = [](const Discrepancy& d) {
    std::string s = std::to_string(d.fixture.i) + " x " + std::to_string(d.fixture.j) + ": expected " +
                    print_sum(d.fixture.expected) + ", computed " + print_sum(d.computed);
    if (!d.fixture.within.empty()) s += " (within " + print_ranges(d.fixture.within) + ")";
    if (!d.fixture.citation.empty()) s += "  [" + d.fixture.citation + "]";
    return s;
  };
  if (json) {
    nlohmann::ordered_json j;
    auto list = [&](const Comparison& c) {
      auto a = nlohmann::ordered_json::array();
      for (const auto& d : c.discrepancies)
        a.push_back({{"i", d.fixture.i},
                     {"j", d.fixture.j},
                     {"expected", print_sum(d.fixture.expected)},
                     {"computed", print_sum(d.computed)},
                     {"within", print_ranges(d.fixture.within)},
                     {"soft", d.fixture.soft},
                     {"citation", d.fixture.citation}});
      return a;
    };
    j["tensor_modules"] = t.size();
    j["compared"] = ch.compared;
    j["skipped"] = ch.skipped;
    j["discrepancies"] = list(ch);
    j["soft_compared"] = cw.compared;
    j["soft_skipped"] = cw.skipped;
    j["soft_discrepancies"] = list(cw);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "fixtures: " << ch.compared << " compared, " << ch.skipped << " outside the tensor\n";
    std::cout << "discrepancies: " << ch.discrepancies.size() << "\n";
    for (const auto& d : ch.discrepancies) std::cout << "  " << line(d) << "\n";
    if (!weak.empty()) {
      std::cout << "soft fixtures: " << cw.compared << " compared, " << cw.skipped << " outside the tensor\n";
      std::cout << "soft discrepancies: " << cw.discrepancies.size() << "\n";
      for (const auto& d : cw.discrepancies) std::cout << "  " << line(d) << "\n";
    }
  }
  return ch.discrepancies.empty() ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact modular data, Verlinde fusion rules and S-matrix completion"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string file, out, branch_parents, cross, name, fixtures;
  std::vector<std::string> branching;
  bool json = false, soft = false;
  int i = 0, j = 0, jobs = 0, k = 0;
  std::optional<int> qi;

  auto* v = app.add_subcommand("validate", "check symmetry, S^2 = C and quantum dimensions");
  v->add_option("file", file, "datum file, - for stdin")->required();
  v->add_flag("--json", json, "structured report");

  auto* c = app.add_subcommand("complete", "solve the unknown S entries from branching data");
  c->add_option("file", file, "partial datum")->required();
  c->add_option("--branching", branching, "file with [branching] sections (repeatable)");
  auto* popt = c->add_option("--parents", branch_parents, "comma-separated parents to use, e.g. lattice:16,lattice:9");
  c->add_option("--cross-check", cross, "independent check of the result: orthogonality");
  c->add_option("--name", name, "header name of the completed datum");
  c->add_option("-o,--output", out, "output file (default stdout)");

  auto* f = app.add_subcommand("fuse", "fusion product of two modules");
  f->add_option("file", file)->required();
  f->add_option("i", i)->required();
  f->add_option("j", j)->required();

  auto* t = app.add_subcommand("table", "sorted \"i j k N\" triples of the fusion tensor");
  t->add_option("file", file)->required();
  t->add_option("--jobs", jobs, "worker threads (0: default)");
  t->add_option("-o,--output", out);

  auto* q = app.add_subcommand("qdim", "quantum dimensions");
  q->add_option("file", file)->required();
  q->add_option("i", qi);

  auto* g = app.add_subcommand("glob", "global dimension");
  g->add_option("file", file)->required();

  auto* l = app.add_subcommand("lattice", "datum of the rank-1 lattice with (a,a) = 2k");
  l->add_option("--k", k)->required();
  l->add_option("-o,--output", out);

  auto* r = app.add_subcommand("regress", "compare a tensor with fusion fixtures");
  r->add_option("tensor", file, "triples file or datum")->required();
  r->add_option("fixtures", fixtures, "fixture file, triples file or datum")->required();
  r->add_flag("--soft-fixtures", soft, "count soft fixtures as hard");
  r->add_flag("--json", json);
  r->add_option("--jobs", jobs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (v->parsed()) return cmd_validate(file, json);
    if (c->parsed()) return cmd_complete(file, branching, branch_parents, popt->count() > 0, cross, name, out);
    if (f->parsed()) return cmd_fuse(file, i, j);
    if (t->parsed()) return cmd_table(file, jobs, out);
    if (q->parsed()) return cmd_qdim(file, qi);
    if (g->parsed()) return cmd_glob(file);
    if (l->parsed()) return cmd_lattice(k, out);
    if (r->parsed()) return cmd_regress(file, fixtures, soft, json, jobs);
  } catch (const Abort& a) {
    std::cerr << "error: " << a.message << "\n";
    return a.code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
