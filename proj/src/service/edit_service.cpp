#include "cadedit/error.hpp"
#include "cadedit/geometry.hpp"
#include "cadedit/service.hpp"

namespace cadedit::service {

EditService::EditService(ServiceConfig cfg, std::unique_ptr<pipeline::ModelBackend> backend)
    : cfg_(std::move(cfg)),
      backend_(std::move(backend)),
      store_(cfg_.data_dir),
      selective_(cfg_.selective_file()) {}

namespace {

seq::CadModel checked_model(const std::string& text) {
  seq::CadModel model;
  try {
    model = seq::parse(text);
  } catch (const Error& e) {
    throw Error(Errc::InvalidModel, std::string(to_string(e.code())) + ": " + e.what(), e.token_index());
  }
  const seq::ValidationReport report = seq::validate(model);
  if (!report.is_valid) {
    const seq::ValidationIssue& first = report.errors.front();
    throw Error(Errc::InvalidModel, first.code + " at " + first.path + ": " + first.message);
  }
  return model;
}

}  // namespace

EditSession EditService::create_session(const std::string& orig_text) {
  const seq::CadModel model = checked_model(orig_text);
  EditSession s;
  s.id = store_.new_id();
  s.original = seq::serialize(model);
  s.current = s.original;
  s.created = s.updated = pipeline::iso8601_now();
  std::lock_guard<std::mutex> lock(store_.lock_for(s.id));
  store_.save(s);
  return s;
}

EditSession EditService::get_session(const std::string& id) {
  std::lock_guard<std::mutex> lock(store_.lock_for(id));
  return store_.load(id);
}

pipeline::EditResult EditService::submit_instruction(const std::string& id, const std::string& instruction,
                                                     std::optional<std::size_t> k) {
  std::lock_guard<std::mutex> lock(store_.lock_for(id));
  EditSession s = store_.load(id);
  pipeline::EditResult result;
  {
    std::lock_guard<std::mutex> backend_lock(backend_mu_);
    result = pipeline::edit(seq::parse(s.current), instruction, *backend_, k.value_or(cfg_.k),
                            cfg_.sampling, cfg_.retries);
  }
  HistoryEntry entry;
  entry.instruction = instruction;
  entry.orig = s.current;
  entry.masked = result.masked;
  entry.candidates = result.candidates;
  s.history.push_back(std::move(entry));
  s.updated = pipeline::iso8601_now();
  store_.save(s);
  return result;
}

EditSession EditService::apply_selection(const std::string& id, std::size_t index,
                                         const std::string& annotator) {
  std::lock_guard<std::mutex> lock(store_.lock_for(id));
  EditSession s = store_.load(id);
  const pipeline::Candidate& chosen = latest_candidate(s, index);
  if (!chosen.parse_ok) throw Error(Errc::InvalidCandidate, "candidate " + std::to_string(index) + " does not parse");
  seq::CadModel model;
  try {
    model = checked_model(chosen.edit_text);
  } catch (const Error& e) {
    throw Error(Errc::InvalidCandidate, e.what());
  }
  HistoryEntry& entry = s.history.back();
  entry.selection = index;
  entry.annotator = annotator;
  s.current = seq::serialize(model);
  s.updated = pipeline::iso8601_now();

  pipeline::SelectiveRecord rec;
  rec.session = s.id;
  rec.step = s.history.size() - 1;
  rec.annotator = annotator;
  rec.instruction = entry.instruction;
  rec.orig = entry.orig;
  rec.edit = s.current;
  rec.ts = s.updated;
  selective_.record(rec);
  store_.save(s);
  return s;
}

const pipeline::Candidate& EditService::latest_candidate(const EditSession& s, std::size_t index) const {
  if (s.history.empty() || s.history.back().candidates.empty()) {
    throw Error(Errc::InvalidCandidate, "session has no candidates yet");
  }
  const auto& cands = s.history.back().candidates;
  if (index >= cands.size()) {
    throw Error(Errc::InvalidCandidate, "candidate index " + std::to_string(index) + " out of range");
  }
  return cands[index];
}

std::string EditService::candidate_obj(const std::string& id, std::size_t index) {
  const EditSession s = get_session(id);
  const pipeline::Candidate& c = latest_candidate(s, index);
  try {
    return geometry::to_obj(geometry::mesh(geometry::assemble(seq::parse(c.edit_text))));
  } catch (const Error& e) {
    throw Error(Errc::InvalidCandidate, e.what());
  }
}

std::vector<std::uint8_t> EditService::candidate_png(const std::string& id, std::size_t index) {
  const EditSession s = get_session(id);
  const pipeline::Candidate& c = latest_candidate(s, index);
  try {
    return geometry::encode_png(
        geometry::render_preview(geometry::mesh(geometry::assemble(seq::parse(c.edit_text)))));
  } catch (const Error& e) {
    throw Error(Errc::InvalidCandidate, e.what());
  }
}

}  // namespace cadedit::service
