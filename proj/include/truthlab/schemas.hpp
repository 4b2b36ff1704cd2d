#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "truthlab/closure.hpp"
#include "truthlab/syntax.hpp"
#include "truthlab/valuation.hpp"

namespace truthlab {

enum class MetaKind { Sentence, Formula1, Term };

struct SchemaArgs {
  std::vector<FormulaPtr> sentences;
  std::vector<std::pair<std::string, FormulaPtr>> formulas;
  std::vector<Term> terms;
};

struct Schema {
  std::string id;
  std::vector<MetaKind> metavars;
  Lang metavar_lang = Lang::LT;
  // Adds singly and doubly quoted truth ascriptions to the metavariable
  // ranges (the iterated-truth axioms are vacuous without them at depth 0).
  bool quoted_enrichment = false;
  // Instantiates term metavariables over sentence-denoting terms of the
  // schema's language only (the Sent side condition of T15/D2/D3).
  bool sentence_terms_only = false;
  std::function<FormulaPtr(const SchemaArgs&, const SentenceSystem&)> build;
};

struct Theory {
  std::string id;
  Lang lang = Lang::LT;
  std::optional<DetVariant> delta_variant;  // CD+|T / RTS families
  std::vector<Schema> schemas;
  std::vector<std::string> semantic_only;  // recorded, not instantiated
};

const std::vector<std::string>& theory_ids();
const Theory& theory(const std::string& id);  // throws UnknownTheory
std::vector<Schema> catalog(const std::string& theory_id);
// Resolves "theory:schema", a bare schema id, or the TDel alias "T16".
std::pair<const Theory*, const Schema*> find_schema(const std::string& schema_id);

struct CheckLimits {
  int max_pool = 2000;
  long max_instances_per_schema = 4000000;
  int failure_cap = 50;
};

std::vector<FormulaPtr> instantiate(const Schema& s, const SentenceSystem& sys,
                                    const CheckLimits& limits = {});

struct SchemaResult {
  std::string id;
  long instances = 0;
  long skipped = 0;  // fragment-indeterminate (FH stage models)
  long failures_total = 0;
  std::vector<std::string> failures;  // printed instances, capped
};

struct CheckReport {
  std::string theory;
  std::string model;
  int fragment_sentences = 0;
  int fragment_terms = 0;
  int fragment_formulas = 0;
  int fragment_depth = 0;
  std::vector<SchemaResult> schemas;
  std::vector<std::string> semantic_only;
  bool pass = true;

  std::string to_json() const;  // stable field order, byte-stable
  std::string to_text() const;
};

CheckReport check(const ModelPtr& m, const std::string& theory_id,
                  const CheckLimits& limits = {});

struct Counterexample {
  std::string schema_id;
  FormulaPtr instance;          // the schema instance that fails (pre-delta)
  std::string printed;
};

std::optional<Counterexample> find_counterexample(const ModelPtr& m, const std::string& schema_id,
                                                  const CheckLimits& limits = {});

}  // namespace truthlab
