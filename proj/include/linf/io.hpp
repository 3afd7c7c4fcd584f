#pragma once

#include "linf/derived.hpp"
#include "linf/liepair.hpp"

#include <json.hpp>

#include <memory>
#include <string>
#include <vector>

namespace linf::io {

using json = nlohmann::json;

// Input that does not match the job schema.
class SchemaError : public Error {
public:
  using Error::Error;
};

struct Caps {
  int arity = 4;
  int weight = 4;
  int poly_degree = 6;
  bool exhaustive = false;
  bool certificates = false;
};

json to_json(const Vec &v);
json to_json(const Dgca &a);
json to_json(const DgModule &m);
// Brackets on generator words (Q-words for a non-free module) up to the cap.
json to_json(const LInftyStructure &s, int cap);
json to_json(const LInftyMorphism &F, int cap);
json to_json(const Check &c);

// Parsing context: objects may be inline or {"file": path} relative to dir;
// identical base algebras share one instance.
class Reader {
public:
  explicit Reader(std::string dir = ".", Caps caps = {});

  const Caps &caps() const { return caps_; }
  json resolve(const json &j) const;

  Vec vec(const json &j) const;
  LieAlgebra lie(const json &j) const;
  DgcaPtr dgca(const json &j);
  ModPtr module(const json &j);
  SPtr linfty(const json &j);
  LInftyMorphism morphism(const json &j);
  std::shared_ptr<DgLie> dgla(const json &j);
  std::shared_ptr<DgLieMorphism> dgla_morphism(const json &j);
  ModuleMap module_map(const json &j, const ModPtr &src, const ModPtr &tgt);
  DgcaMorphism dgca_morphism(const json &j, const DgcaPtr &default_src);
  AlgPtr algebroid(const json &j);
  Connection connection(const json *j, const AlgPtr &a);
  LiePair liepair(const json &j) const;
  LiePairConnection liepair_connection(const json *j, const LiePair &p) const;

private:
  std::string dir_;
  Caps caps_;
  std::map<std::string, DgcaPtr> dgcas_;
  std::vector<std::shared_ptr<DgLie>> keep_;
};

struct Outcome {
  int code = 0; // 0 all checks pass, 1 a check failed, 2 invalid input
  json report;
  std::string summary;
};

const std::vector<std::string> &verbs();
// Caps given on the command line override those in the job.
Outcome run_job(const json &job, const std::string &dir, Caps caps, const json &cli_caps = {});
Outcome run_file(const std::string &path, Caps caps, const json &cli_caps = {});

} // namespace linf::io
