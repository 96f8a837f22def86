#include "scriptorium/query.hpp"

#include <algorithm>
#include <mutex>

#include <json.hpp>

#include "scriptorium/error.hpp"
#include "scriptorium/fileio.hpp"
#include "scriptorium/text.hpp"

namespace scriptorium::query {

using docs::EntityDocument;
using docs::FieldValue;
using json = nlohmann::json;

namespace {

template <typename F>
bool any_at(const EntityDocument& doc, const FieldPath& tmpl, F&& pred) {
  for (const auto& [path, value] : doc.values)
    if (path.same_template(tmpl) && pred(value)) return true;
  return false;
}

const FieldPath& leaf_path(const Predicate& p) {
  static const FieldPath none;
  return std::visit(
      [](const auto& x) -> const FieldPath& {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, StatusIs> || std::is_same_v<T, TypeIs> || std::is_same_v<T, LinksTo>)
          return none;
        else
          return x.path;
      },
      p);
}

std::string term_key(const FieldPath& tmpl, std::string_view term) { return tmpl.str() + "|" + std::string(term); }

template <typename Set>
void intersect_into(std::optional<std::set<std::string>>& acc, const Set& ids) {
  if (!acc) {
    acc = std::set<std::string>(ids.begin(), ids.end());
    return;
  }
  std::set<std::string> out;
  for (const auto& id : *acc)
    if (ids.count(id)) out.insert(id);
  acc = std::move(out);
}

}  // namespace

void validate_predicates(const schema::EntityTypeSchema& schema, const Conjunction& predicates) {
  for (const auto& p : predicates) {
    std::optional<FieldPath> path;
    if (const auto* l = std::get_if<LinksTo>(&p))
      path = l->path;
    else if (!std::holds_alternative<StatusIs>(p) && !std::holds_alternative<TypeIs>(p))
      path = leaf_path(p);
    if (!path) continue;

    for (const auto& seg : path->segments())
      if (seg.index) throw Error(Errc::invalid_path, "predicate paths carry no indices: " + path->str());
    auto node = schema::find_node(schema, *path);
    if (node.field == nullptr)
      throw Error(Errc::invalid_path, "'" + path->str() + "' is not a field of " + schema.type_name);
    const auto kind = node.field->kind.kind;
    const auto kind_name = std::string(schema::to_string(kind));
    if ((std::holds_alternative<DateWithin>(p) || std::holds_alternative<DateOverlaps>(p)) &&
        kind != schema::Kind::time_expression)
      throw Error(Errc::type_mismatch, "date predicate on " + kind_name + " field " + path->str());
    if (std::holds_alternative<TermIs>(p) && kind != schema::Kind::vocab_term && kind != schema::Kind::thesaurus_term)
      throw Error(Errc::type_mismatch, "term predicate on " + kind_name + " field " + path->str());
    if (std::holds_alternative<LinksTo>(p) && kind != schema::Kind::entity_link)
      throw Error(Errc::type_mismatch, "link predicate on " + kind_name + " field " + path->str());
  }
}

bool matches(const EntityDocument& doc, const Predicate& predicate) {
  return std::visit(
      [&](const auto& p) -> bool {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Equals>) {
          const auto want = text::normalize_label(p.text);
          return any_at(doc, p.path, [&](const FieldValue& v) { return text::normalize_label(docs::display_text(v)) == want; });
        } else if constexpr (std::is_same_v<T, Contains>) {
          const auto want = text::casefold(p.text);
          return any_at(doc, p.path, [&](const FieldValue& v) {
            return text::casefold(docs::display_text(v)).find(want) != std::string::npos;
          });
        } else if constexpr (std::is_same_v<T, TermIs>) {
          return any_at(doc, p.path, [&](const FieldValue& v) {
            if (const auto* t = std::get_if<docs::TermRef>(&v)) return t->term_id == p.term_id;
            if (const auto* c = std::get_if<docs::ThesaurusRef>(&v)) return c->concept_id == p.term_id;
            return false;
          });
        } else if constexpr (std::is_same_v<T, LinksTo>) {
          for (const auto& [path, value] : doc.values) {
            if (p.path && !path.same_template(*p.path)) continue;
            if (const auto* l = std::get_if<docs::EntityLink>(&value); l && p.entity_ids.count(l->target_id)) return true;
          }
          return false;
        } else if constexpr (std::is_same_v<T, DateWithin>) {
          return any_at(doc, p.path, [&](const FieldValue& v) {
            const auto* t = std::get_if<docs::TimeVal>(&v);
            return t != nullptr && chrono::within(t->span, p.span);
          });
        } else if constexpr (std::is_same_v<T, DateOverlaps>) {
          return any_at(doc, p.path, [&](const FieldValue& v) {
            const auto* t = std::get_if<docs::TimeVal>(&v);
            return t != nullptr && chrono::overlaps(t->span, p.span);
          });
        } else if constexpr (std::is_same_v<T, StatusIs>) {
          return doc.status == p.status;
        } else {
          return doc.type_name == p.type_name;
        }
      },
      predicate);
}

bool matches_all(const EntityDocument& doc, const Conjunction& predicates) {
  return std::all_of(predicates.begin(), predicates.end(), [&](const Predicate& p) { return matches(doc, p); });
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json to_json(const Predicate& predicate) {
  return std::visit(
      [](const auto& p) -> json {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, Equals>) return {{"op", "equals"}, {"path", p.path.str()}, {"text", p.text}};
        else if constexpr (std::is_same_v<T, Contains>)
          return {{"op", "contains"}, {"path", p.path.str()}, {"text", p.text}};
        else if constexpr (std::is_same_v<T, TermIs>)
          return {{"op", "term_is"}, {"path", p.path.str()}, {"term", p.term_id}};
        else if constexpr (std::is_same_v<T, LinksTo>) {
          json j = {{"op", "links_to"}, {"ids", p.entity_ids}};
          if (p.path) j["path"] = p.path->str();
          return j;
        } else if constexpr (std::is_same_v<T, DateWithin>)
          return {{"op", "date_within"}, {"path", p.path.str()}, {"earliest", p.span.earliest}, {"latest", p.span.latest}};
        else if constexpr (std::is_same_v<T, DateOverlaps>)
          return {{"op", "date_overlaps"}, {"path", p.path.str()}, {"earliest", p.span.earliest}, {"latest", p.span.latest}};
        else if constexpr (std::is_same_v<T, StatusIs>)
          return {{"op", "status_is"}, {"status", std::string(docs::to_string(p.status))}};
        else
          return {{"op", "type_is"}, {"type", p.type_name}};
      },
      predicate);
}

std::string str_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) throw Error(Errc::bad_request, std::string("predicate needs string '") + key + "'");
  return it->get<std::string>();
}

chrono::TimeSpan span_field(const json& j) {
  if (j.contains("expr")) return chrono::normalize(str_field(j, "expr"));
  if (!j.contains("earliest") || !j.contains("latest") || !j["earliest"].is_number_integer() ||
      !j["latest"].is_number_integer())
    throw Error(Errc::bad_request, "date predicate needs integer 'earliest' and 'latest' or an 'expr'");
  chrono::TimeSpan s{j["earliest"].get<int>(), j["latest"].get<int>()};
  if (s.earliest > s.latest) throw Error(Errc::bad_request, "date predicate span is inverted");
  return s;
}

Predicate from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::bad_request, "predicate must be an object");
  const auto op = str_field(j, "op");
  auto path = [&] {
    try {
      return FieldPath::parse(str_field(j, "path"));
    } catch (const Error& e) {
      if (e.code() == Errc::malformed_path) throw Error(Errc::invalid_path, e.what());
      throw;
    }
  };
  if (op == "equals") return Equals{path(), str_field(j, "text")};
  if (op == "contains") return Contains{path(), str_field(j, "text")};
  if (op == "term_is") return TermIs{path(), str_field(j, "term")};
  if (op == "links_to") {
    LinksTo l;
    if (j.contains("path")) l.path = path();
    if (j.contains("id")) l.entity_ids.insert(str_field(j, "id"));
    if (j.contains("ids")) {
      if (!j["ids"].is_array()) throw Error(Errc::bad_request, "'ids' must be an array");
      for (const auto& id : j["ids"]) {
        if (!id.is_string()) throw Error(Errc::bad_request, "'ids' must hold strings");
        l.entity_ids.insert(id.get<std::string>());
      }
    }
    return l;
  }
  if (op == "date_within") return DateWithin{path(), span_field(j)};
  if (op == "date_overlaps") return DateOverlaps{path(), span_field(j)};
  if (op == "status_is") {
    auto s = docs::status_from_string(str_field(j, "status"));
    if (!s) throw Error(Errc::bad_request, "unknown status");
    return StatusIs{*s};
  }
  if (op == "type_is") return TypeIs{str_field(j, "type")};
  throw Error(Errc::bad_request, "unknown predicate op '" + op + "'");
}

Conjunction from_json_list(const json& j) {
  const json* list = &j;
  if (j.is_object()) {
    if (!j.contains("predicates")) throw Error(Errc::bad_request, "expected 'predicates'");
    list = &j["predicates"];
  }
  if (!list->is_array()) throw Error(Errc::bad_request, "predicates must be an array");
  Conjunction out;
  for (const auto& p : *list) out.push_back(from_json(p));
  return out;
}

json list_to_json(const Conjunction& predicates) {
  json arr = json::array();
  for (const auto& p : predicates) arr.push_back(to_json(p));
  return arr;
}

}  // namespace

Conjunction parse_predicates(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(Errc::bad_request, std::string("invalid JSON: ") + e.what());
  }
  return from_json_list(j);
}

std::string predicates_to_json(const Conjunction& predicates) {
  return json{{"predicates", list_to_json(predicates)}}.dump();
}

// ---------------------------------------------------------------------------
// Service

QueryService::QueryService(docs::DocumentStore& store, access::AccessControl& access)
    : store_(store), access_(access) {}

void QueryService::attach() {
  store_.add_listener([this](const docs::Change& c) { on_change(c); });
  store_.set_backlink_source([this](const std::string& id) {
    auto set = backlinks(id);
    return std::vector<Backlink>(set.begin(), set.end());
  });
}

void QueryService::on_change(const docs::Change& change) {
  std::unique_lock lock(mutex_);
  unindex_locked(change.entity_id);
  if (change.after) index_locked(change.after);
  refresh_referrers_locked(change.entity_id);
}

// Links stored without a label render as the target's first summary cell,
// so referrers are re-rendered when the target changes.
std::string QueryService::render_locked(const FieldValue& value) const {
  if (const auto* l = std::get_if<docs::EntityLink>(&value); l && l->label.empty()) {
    auto t = entries_.find(l->target_id);
    if (t != entries_.end() && !t->second.cells.empty() && !t->second.cells.front().empty())
      return t->second.cells.front();
    return l->target_id;
  }
  return docs::display_text(value);
}

void QueryService::refresh_referrers_locked(const std::string& entity_id) {
  auto b = backlinks_.find(entity_id);
  if (b == backlinks_.end()) return;
  std::set<std::string> referrers;
  for (const auto& ref : b->second)
    if (ref.referrer_id != entity_id) referrers.insert(ref.referrer_id);
  for (const auto& id : referrers) {
    auto e = entries_.find(id);
    if (e == entries_.end()) continue;
    auto doc = e->second.doc;
    unindex_locked(id);
    index_locked(std::move(doc));
  }
}

void QueryService::index_locked(std::shared_ptr<const EntityDocument> doc) {
  Entry e;
  e.doc = doc;
  for (const auto& [path, value] : doc->values) {
    for (auto& tok : text::tokenize(render_locked(value))) ++e.tokens[std::move(tok)];
    if (const auto* t = std::get_if<docs::TermRef>(&value))
      term_postings_[term_key(path.without_indices(), t->term_id)].insert(doc->id);
    else if (const auto* c = std::get_if<docs::ThesaurusRef>(&value))
      term_postings_[term_key(path.without_indices(), c->concept_id)].insert(doc->id);
    else if (const auto* l = std::get_if<docs::EntityLink>(&value))
      backlinks_[l->target_id].insert({doc->id, path});
  }
  if (auto schema = store_.schemas().latest(doc->type_name)) {
    for (const auto& col : schema->summary_columns) {
      std::vector<std::string> parts;
      for (const auto& [path, value] : doc->values)
        if (path.same_template(col)) parts.push_back(render_locked(value));
      e.cells.push_back(text::join(parts, "; "));
    }
  }
  for (const auto& [tok, n] : e.tokens) token_postings_[tok][doc->id] = n;
  type_postings_[doc->type_name].insert(doc->id);
  entries_[doc->id] = std::move(e);
}

void QueryService::unindex_locked(const std::string& entity_id) {
  auto it = entries_.find(entity_id);
  if (it == entries_.end()) return;
  const auto& doc = *it->second.doc;
  for (const auto& [tok, n] : it->second.tokens) {
    auto p = token_postings_.find(tok);
    if (p == token_postings_.end()) continue;
    p->second.erase(entity_id);
    if (p->second.empty()) token_postings_.erase(p);
  }
  for (const auto& [path, value] : doc.values) {
    std::string key;
    if (const auto* t = std::get_if<docs::TermRef>(&value))
      key = term_key(path.without_indices(), t->term_id);
    else if (const auto* c = std::get_if<docs::ThesaurusRef>(&value))
      key = term_key(path.without_indices(), c->concept_id);
    if (!key.empty()) {
      if (auto p = term_postings_.find(key); p != term_postings_.end()) {
        p->second.erase(entity_id);
        if (p->second.empty()) term_postings_.erase(p);
      }
    }
    if (const auto* l = std::get_if<docs::EntityLink>(&value)) {
      if (auto b = backlinks_.find(l->target_id); b != backlinks_.end()) {
        b->second.erase({entity_id, path});
        if (b->second.empty()) backlinks_.erase(b);
      }
    }
  }
  if (auto t = type_postings_.find(doc.type_name); t != type_postings_.end()) t->second.erase(entity_id);
  entries_.erase(it);
}

IndexStats QueryService::rebuild_index() {
  auto all = store_.all();
  std::unique_lock lock(mutex_);
  entries_.clear();
  token_postings_.clear();
  type_postings_.clear();
  term_postings_.clear();
  backlinks_.clear();
  for (const auto& doc : all) index_locked(doc);
  // Second pass so unlabelled links see targets indexed after them.
  for (const auto& doc : all) {
    unindex_locked(doc->id);
    index_locked(doc);
  }
  IndexStats s{entries_.size(), token_postings_.size(), 0};
  for (const auto& [t, refs] : backlinks_) s.links += refs.size();
  return s;
}

IndexStats QueryService::stats() const {
  std::shared_lock lock(mutex_);
  IndexStats s{entries_.size(), token_postings_.size(), 0};
  for (const auto& [t, refs] : backlinks_) s.links += refs.size();
  return s;
}

bool QueryService::visible(const access::User& viewer, const EntityDocument& doc,
                           const access::PolicyState& state) const {
  return access::authorize(viewer, access::Action::view, doc.resource(), state).allowed;
}

std::vector<Row> QueryService::filter_rows(const std::string& type_name, std::string_view filter,
                                           const access::User& viewer) const {
  const auto state = access_.snapshot();
  const auto needle = text::casefold(text::trim(filter));
  std::shared_lock lock(mutex_);
  std::vector<Row> out;
  auto t = type_postings_.find(type_name);
  if (t == type_postings_.end()) return out;
  for (const auto& id : t->second) {
    const auto& e = entries_.find(id)->second;
    if (!visible(viewer, *e.doc, state)) continue;
    Row row{id, type_name, std::string(docs::to_string(e.doc->status)), e.doc->creator_user_id, e.cells};
    bool hit = needle.empty();
    auto check = [&](const std::string& s) {
      if (!hit && text::casefold(s).find(needle) != std::string::npos) hit = true;
    };
    for (const auto& c : row.cells) check(c);
    check(row.id);
    check(row.creator);
    check(row.status);
    if (hit) out.push_back(std::move(row));
  }
  return out;
}

std::vector<Hit> QueryService::keyword_search(std::string_view q, const std::optional<std::set<std::string>>& types,
                                              const access::User& viewer) const {
  auto qtokens = text::tokenize(q);
  std::sort(qtokens.begin(), qtokens.end());
  qtokens.erase(std::unique(qtokens.begin(), qtokens.end()), qtokens.end());
  std::vector<Hit> out;
  if (qtokens.empty()) return out;

  const auto state = access_.snapshot();
  std::shared_lock lock(mutex_);
  std::map<std::string, size_t> scores;
  bool first = true;
  for (const auto& qt : qtokens) {
    std::map<std::string, size_t> here;
    for (auto it = token_postings_.lower_bound(qt); it != token_postings_.end() && it->first.starts_with(qt); ++it)
      for (const auto& [id, n] : it->second) here[id] += n;
    if (first) {
      scores = std::move(here);
      first = false;
    } else {
      std::map<std::string, size_t> kept;
      for (const auto& [id, n] : scores)
        if (auto h = here.find(id); h != here.end()) kept.emplace(id, n + h->second);
      scores = std::move(kept);
    }
    if (scores.empty()) return out;
  }
  for (const auto& [id, score] : scores) {
    const auto& e = entries_.find(id)->second;
    if (types && !types->count(e.doc->type_name)) continue;
    if (!visible(viewer, *e.doc, state)) continue;
    out.push_back({id, e.doc->type_name, score});
  }
  std::sort(out.begin(), out.end(), [](const Hit& a, const Hit& b) {
    return a.score != b.score ? a.score > b.score : a.id < b.id;
  });
  return out;
}

std::vector<std::string> QueryService::advanced_search(const std::string& type_name, const Conjunction& predicates,
                                                       const access::User& viewer) const {
  auto schema = store_.schemas().require(type_name);
  validate_predicates(*schema, predicates);
  const auto state = access_.snapshot();

  std::shared_lock lock(mutex_);
  std::optional<std::set<std::string>> candidates;
  static const std::set<std::string> empty;
  auto t = type_postings_.find(type_name);
  intersect_into(candidates, t == type_postings_.end() ? empty : t->second);

  // Postings narrow the candidates; every survivor is then checked in full.
  for (const auto& p : predicates) {
    if (candidates->empty()) break;
    if (const auto* term = std::get_if<TermIs>(&p)) {
      auto it = term_postings_.find(term_key(term->path, term->term_id));
      intersect_into(candidates, it == term_postings_.end() ? empty : it->second);
    } else if (const auto* link = std::get_if<LinksTo>(&p)) {
      std::set<std::string> referrers;
      for (const auto& target : link->entity_ids) {
        auto it = backlinks_.find(target);
        if (it == backlinks_.end()) continue;
        for (const auto& b : it->second)
          if (!link->path || b.path.same_template(*link->path)) referrers.insert(b.referrer_id);
      }
      intersect_into(candidates, referrers);
    } else if (const auto* type = std::get_if<TypeIs>(&p); type && type->type_name != type_name) {
      candidates->clear();
    }
  }

  std::vector<std::string> out;
  for (const auto& id : *candidates) {
    const auto& e = entries_.find(id)->second;
    if (matches_all(*e.doc, predicates) && visible(viewer, *e.doc, state)) out.push_back(id);
  }
  return out;
}

std::set<std::string> QueryService::link_targets(const std::set<std::string>& sources,
                                                 const std::optional<FieldPath>& path,
                                                 const access::User& viewer) const {
  const auto state = access_.snapshot();
  std::shared_lock lock(mutex_);
  std::set<std::string> out;
  for (const auto& id : sources) {
    auto e = entries_.find(id);
    if (e == entries_.end() || !visible(viewer, *e->second.doc, state)) continue;
    for (const auto& [p, link] : docs::outbound_links(*e->second.doc)) {
      if (path && !p.same_template(*path)) continue;
      auto target = entries_.find(link.target_id);
      if (target != entries_.end() && visible(viewer, *target->second.doc, state)) out.insert(link.target_id);
    }
  }
  return out;
}

std::set<Backlink> QueryService::backlinks(const std::string& entity_id) const {
  std::shared_lock lock(mutex_);
  auto it = backlinks_.find(entity_id);
  return it == backlinks_.end() ? std::set<Backlink>{} : it->second;
}

std::map<std::string, std::set<Backlink>> QueryService::backlink_table() const {
  std::shared_lock lock(mutex_);
  return {backlinks_.begin(), backlinks_.end()};
}

// ---------------------------------------------------------------------------
// Saved queries

const SavedQuery& QueryService::require_query(const std::string& query_id) const {
  auto it = queries_.find(query_id);
  if (it == queries_.end()) throw Error(Errc::unknown_query, "unknown query '" + query_id + "'");
  return it->second;
}

bool QueryService::can_run(const SavedQuery& q, const access::User& user) const {
  if (user.role == access::Role::system_admin || q.owner_user_id == user.user_id) return true;
  return q.shared_with_org && !q.org_id.empty() && q.org_id == user.org_id;
}

SavedQuery QueryService::save_query(const std::string& name, const std::string& type_name,
                                    const Conjunction& predicates, bool shared_with_org, const access::User& owner) {
  if (text::trim(name).empty()) throw Error(Errc::empty_name, "query name must not be empty");
  validate_predicates(*store_.schemas().require(type_name), predicates);
  SavedQuery q;
  {
    std::unique_lock lock(queries_mutex_);
    for (const auto& [id, existing] : queries_)
      if (existing.owner_user_id == owner.user_id && existing.name == name)
        throw Error(Errc::name_collision, "'" + name + "' is already one of your saved queries");
    std::string digits = std::to_string(++query_seq_);
    if (digits.size() < 6) digits.insert(0, 6 - digits.size(), '0');
    q = SavedQuery{"q-" + digits, name, owner.user_id, owner.org_id, type_name, predicates, shared_with_org};
    queries_.emplace(q.query_id, q);
  }
  persist_queries();
  return q;
}

std::vector<SavedQuery> QueryService::list_queries(const access::User& user) const {
  std::shared_lock lock(queries_mutex_);
  std::vector<SavedQuery> out;
  for (const auto& [id, q] : queries_)
    if (can_run(q, user)) out.push_back(q);
  return out;
}

std::vector<std::string> QueryService::run_query(const std::string& query_id, const access::User& user) const {
  SavedQuery q;
  {
    std::shared_lock lock(queries_mutex_);
    q = require_query(query_id);
    if (!can_run(q, user)) throw Error(Errc::permission_denied, "query '" + query_id + "' is private");
  }
  return advanced_search(q.type_name, q.predicates, user);
}

void QueryService::delete_query(const std::string& query_id, const access::User& user) {
  {
    std::unique_lock lock(queries_mutex_);
    const auto& q = require_query(query_id);
    if (q.owner_user_id != user.user_id && user.role != access::Role::system_admin)
      throw Error(Errc::permission_denied, "only the owner deletes query '" + query_id + "'");
    queries_.erase(query_id);
  }
  persist_queries();
}

void QueryService::set_queries_file(std::filesystem::path file) { queries_file_ = std::move(file); }

void QueryService::persist_queries() const {
  if (!queries_file_.empty()) save_queries(queries_file_);
}

void QueryService::save_queries(const std::filesystem::path& file) const {
  json arr = json::array();
  {
    std::shared_lock lock(queries_mutex_);
    for (const auto& [id, q] : queries_)
      arr.push_back({{"id", q.query_id},
                     {"name", q.name},
                     {"owner", q.owner_user_id},
                     {"org", q.org_id},
                     {"type", q.type_name},
                     {"shared", q.shared_with_org},
                     {"predicates", list_to_json(q.predicates)}});
  }
  fileio::write_file_atomic(file, json{{"queries", arr}}.dump(2) + "\n");
}

void QueryService::load_queries(const std::filesystem::path& file) {
  set_queries_file(file);
  if (!std::filesystem::exists(file)) return;
  auto j = json::parse(fileio::read_file(file));
  std::map<std::string, SavedQuery> loaded;
  long seq = 0;
  for (const auto& q : j.at("queries")) {
    SavedQuery s{q.at("id").get<std::string>(),   q.at("name").get<std::string>(), q.at("owner").get<std::string>(),
                 q.at("org").get<std::string>(),  q.at("type").get<std::string>(), from_json_list(q.at("predicates")),
                 q.at("shared").get<bool>()};
    if (s.query_id.size() > 2) seq = std::max(seq, std::atol(s.query_id.c_str() + 2));
    loaded.emplace(s.query_id, std::move(s));
  }
  std::unique_lock lock(queries_mutex_);
  queries_ = std::move(loaded);
  query_seq_ = seq;
}

}  // namespace scriptorium::query
