#include "scriptorium/server.hpp"

#include <functional>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "scriptorium/curation.hpp"
#include "scriptorium/text.hpp"

namespace scriptorium::api {

using json = nlohmann::json;
using docs::EntityDocument;
using docs::FieldValue;

int http_status(Errc code) {
  switch (code) {
    case Errc::unknown_type:
    case Errc::unknown_entity:
    case Errc::unknown_version:
    case Errc::unknown_user:
    case Errc::unknown_org:
    case Errc::unknown_vocabulary:
    case Errc::unknown_term:
    case Errc::unknown_concept:
    case Errc::unknown_query:
      return 404;
    case Errc::authentication_failed: return 401;
    case Errc::permission_denied:
    case Errc::cross_org:
    case Errc::insufficient_role:
    case Errc::static_vocabulary_rejects_user_term:
      return 403;
    case Errc::revision_conflict:
    case Errc::collision:
    case Errc::name_collision:
    case Errc::duplicate_name:
    case Errc::duplicate_user:
    case Errc::illegal_transition:
      return 409;
    case Errc::network: return 502;
    case Errc::io: return 500;
    case Errc::syntax:
    case Errc::bad_request:
    case Errc::malformed_path:
    case Errc::malformed_line:
    case Errc::undeclared_prefix:
    case Errc::missing_domain:
    case Errc::unrecognized_expression:
    case Errc::decade_not_aligned:
    case Errc::nested_range:
    case Errc::inverted_range:
    case Errc::empty_label:
    case Errc::empty_name:
    case Errc::unknown_source:
      return 400;
    default: return 422;
  }
}

// ---------------------------------------------------------------------------
// JSON encodings

namespace {

json value_json(const FieldValue& v) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, docs::EntityLink>)
          return {{"kind", "entity-link"}, {"type", x.target_type}, {"id", x.target_id}, {"label", x.label}};
        else if constexpr (std::is_same_v<T, docs::TermRef>)
          return {{"kind", "vocab-term"}, {"vocab", x.vocab}, {"term", x.term_id}, {"label", x.label}};
        else if constexpr (std::is_same_v<T, docs::ThesaurusRef>)
          return {{"kind", "thesaurus-term"}, {"thesaurus", x.thesaurus}, {"concept", x.concept_id}, {"label", x.label}};
        else if constexpr (std::is_same_v<T, docs::PlainText>) return {{"kind", "text-plain"}, {"text", x.text}};
        else if constexpr (std::is_same_v<T, docs::FormattedText>)
          return {{"kind", "text-formatted"}, {"markup", x.markup}};
        else if constexpr (std::is_same_v<T, docs::NumberVal>) return {{"kind", "number"}, {"value", x.value}};
        else if constexpr (std::is_same_v<T, docs::TimeVal>)
          return {{"kind", "time-expression"}, {"expr", x.expr}, {"earliest", x.span.earliest}, {"latest", x.span.latest}};
        else if constexpr (std::is_same_v<T, docs::Coordinates>) {
          json pts = json::array();
          for (const auto& p : x.points) pts.push_back({p.lat, p.lon});
          return {{"kind", "geo-coordinates"},
                  {"shape", x.shape == docs::Coordinates::Shape::point ? "point" : "polygon"},
                  {"points", pts}};
        } else if constexpr (std::is_same_v<T, docs::ExternalPlace>)
          return {{"kind", "geo-external-id"}, {"source", std::string(docs::to_string(x.source))},
                  {"id", x.external_id}, {"lat", x.lat}, {"lon", x.lon}};
        else
          return {{"kind", "digital-file"}, {"attachment", x.attachment_id}, {"media", x.media}};
      },
      v);
}

std::string str(const json& j, const char* key, bool required = true) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) {
    if (required) throw Error(Errc::bad_request, std::string("missing '") + key + "'");
    return {};
  }
  if (!it->is_string()) throw Error(Errc::bad_request, std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

double num(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number()) throw Error(Errc::bad_request, std::string("'") + key + "' must be a number");
  return it->get<double>();
}

FieldValue value_from_json(const json& j, Workspace& ws) {
  if (!j.is_object()) throw Error(Errc::bad_request, "value must be an object");
  const auto kind = schema::kind_from_string(str(j, "kind"));
  if (!kind) throw Error(Errc::bad_request, "unknown value kind");
  switch (*kind) {
    case schema::Kind::entity_link: {
      docs::EntityLink l{str(j, "type", false), str(j, "id"), str(j, "label", false)};
      if (l.target_type.empty() || l.label.empty())
        if (auto target = ws.store().find(l.target_id)) {
          if (l.target_type.empty()) l.target_type = target->type_name;
        }
      return l;
    }
    case schema::Kind::vocab_term: {
      docs::TermRef t{str(j, "vocab"), str(j, "term"), str(j, "label", false)};
      if (t.label.empty()) t.label = ws.vocabularies().term_label(t.vocab, t.term_id);
      return t;
    }
    case schema::Kind::thesaurus_term: {
      docs::ThesaurusRef c{str(j, "thesaurus"), str(j, "concept"), str(j, "label", false)};
      if (c.label.empty()) c.label = ws.vocabularies().concept_label(c.thesaurus, c.concept_id);
      return c;
    }
    case schema::Kind::text_plain: return docs::PlainText{str(j, "text")};
    case schema::Kind::text_formatted: return docs::FormattedText{str(j, "markup")};
    case schema::Kind::number: return docs::NumberVal{num(j, "value")};
    case schema::Kind::time_expression: return docs::TimeVal::from(str(j, "expr"));
    case schema::Kind::geo_coordinates: {
      docs::Coordinates c;
      c.shape = str(j, "shape", false) == "polygon" ? docs::Coordinates::Shape::polygon : docs::Coordinates::Shape::point;
      if (!j.contains("points") || !j["points"].is_array()) throw Error(Errc::bad_request, "'points' must be an array");
      for (const auto& p : j["points"]) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
          throw Error(Errc::bad_request, "points are [lat, lon] pairs");
        c.points.push_back({p[0].get<double>(), p[1].get<double>()});
      }
      return c;
    }
    case schema::Kind::geo_external_id: {
      auto src = docs::place_source_from_string(str(j, "source"));
      if (!src) throw Error(Errc::unknown_source, "unknown gazetteer");
      return docs::ExternalPlace{*src, str(j, "id"), num(j, "lat"), num(j, "lon")};
    }
    case schema::Kind::digital_file: return docs::FileRef{str(j, "attachment"), str(j, "media", false)};
  }
  throw Error(Errc::bad_request, "unknown value kind");
}

json entity_json(const EntityDocument& doc, const schema::EntityTypeSchema* schema) {
  json values = json::array();
  auto add = [&](const schema::FieldPath& path, const FieldValue& v) {
    auto j = value_json(v);
    j["path"] = path.str();
    values.push_back(std::move(j));
  };
  if (schema) {
    for (const auto& [path, v] : docs::ordered_values(doc, *schema)) add(path, *v);
  } else {
    for (const auto& [path, v] : doc.values) add(path, v);
  }
  return {{"id", doc.id},
          {"type", doc.type_name},
          {"schemaVersion", doc.schema_version},
          {"org", doc.org_id},
          {"creator", doc.creator_user_id},
          {"status", std::string(docs::to_string(doc.status))},
          {"revision", doc.revision},
          {"values", values}};
}

json issues_json(const std::vector<Issue>& issues) {
  json out = json::array();
  for (const auto& i : issues)
    out.push_back({{"severity", i.severity == Severity::error ? "error" : "warning"},
                   {"code", i.code},
                   {"path", i.path},
                   {"message", i.message}});
  return out;
}

json user_json(const access::User& u) {
  return {{"id", u.user_id}, {"name", u.display_name}, {"role", std::string(access::to_string(u.role))}, {"org", u.org_id}};
}

json saved_query_json(const query::SavedQuery& q) {
  return {{"id", q.query_id},   {"name", q.name},   {"owner", q.owner_user_id},
          {"org", q.org_id},    {"type", q.type_name}, {"shared", q.shared_with_org},
          {"predicates", json::parse(query::predicates_to_json(q.predicates))["predicates"]}};
}

json vocabulary_json(const vocab::Vocabulary& v) {
  json terms = json::array();
  for (const auto& [id, t] : v.terms) {
    json j = {{"id", id}, {"labels", t.labels}, {"deprecated", t.deprecated}};
    if (!t.merged_into.empty()) j["mergedInto"] = t.merged_into;
    terms.push_back(std::move(j));
  }
  return {{"id", v.vocab_id},
          {"name", v.name},
          {"mode", std::string(schema::to_string(v.mode))},
          {"lang", v.default_language},
          {"terms", terms}};
}

json thesaurus_json(const vocab::Thesaurus& t) {
  json concepts = json::array();
  for (const auto& [id, c] : t.concepts())
    concepts.push_back({{"id", id},
                        {"pref", c.pref_labels},
                        {"alt", c.alt_labels},
                        {"broader", c.broader},
                        {"narrower", t.narrower(id)}});
  return {{"id", t.id()}, {"name", t.name()}, {"top", t.top_concepts()}, {"concepts", concepts}};
}

json features_json(const FeatureCollection& fc) {
  json features = json::array();
  for (const auto& f : fc.features) {
    json parts = json::array();
    for (const auto& part : f.parts) {
      json coords = json::array();
      for (const auto& p : part) coords.push_back({p.lon, p.lat});
      parts.push_back(std::move(coords));
    }
    json popup = json::object();
    for (const auto& [k, v] : f.popup) popup[k] = v;
    features.push_back({{"kind", std::string(to_string(f.kind))},
                        {"entity", f.source_entity_id},
                        {"coordinates", parts},
                        {"members", f.members},
                        {"popup", popup},
                        {"degenerate", f.degenerate}});
  }
  json unresolved = json::array();
  for (const auto& u : fc.unresolved) unresolved.push_back({{"id", u.entity_id}, {"reason", u.reason}});
  return {{"features", features}, {"unresolved", unresolved}};
}

}  // namespace

std::string entity_to_json(const EntityDocument& doc, const schema::EntityTypeSchema* schema) {
  return entity_json(doc, schema).dump();
}

std::string time_expression_json(std::string_view expr, const chrono::NormalizeOptions& options) {
  auto parsed = chrono::parse_time_expression(expr);
  auto span = chrono::normalize_to_span(parsed, options);
  return json{{"expr", std::string(expr)},
              {"canonical", chrono::print(parsed)},
              {"ast", chrono::describe(parsed)},
              {"earliest", span.earliest},
              {"latest", span.latest}}
      .dump();
}

// ---------------------------------------------------------------------------
// Routes

const std::vector<RouteInfo>& routes() {
  static const std::vector<RouteInfo> table = {
      {"POST", "/api/v1/login", "", false, false},
      {"POST", "/api/v1/logout", "", false, true},
      {"GET", "/api/v1/parse-date", "", false, false},
      {"GET", "/api/v1/public/entities/{id}", "", false, false},
      {"GET", "/api/v1/types", "", false, true},
      {"GET", "/api/v1/types/{type}/schema", "x", false, true},
      {"POST", "/api/v1/admin/orgs", "", true, true},
      {"PUT", "/api/v1/admin/orgs/{org}", "", true, true},
      {"POST", "/api/v1/admin/users", "", true, true},
      {"GET", "/api/v1/entities/{id}", "ii", false, true},
      {"PUT", "/api/v1/entities/{id}", "iii", true, true},
      {"DELETE", "/api/v1/entities/{id}", "vii", true, true},
      {"POST", "/api/v1/entities/{id}/status", "iv", true, true},
      {"POST", "/api/v1/entities/{id}/versions", "v", true, true},
      {"GET", "/api/v1/entities/{id}/versions", "", false, true},
      {"GET", "/api/v1/entities/{id}/versions/{n}", "vi", false, true},
      {"POST", "/api/v1/entities/{id}/copy", "viii", true, true},
      {"POST", "/api/v1/entities/{id}/grants", "ix", true, true},
      {"DELETE", "/api/v1/entities/{id}/grants/{user}", "", true, true},
      {"GET", "/api/v1/entities/{id}/export", "xi", false, true},
      {"GET", "/api/v1/entities/{id}/backlinks", "", false, true},
      {"GET", "/api/v1/entities/{id}/validate", "", false, true},
      {"POST", "/api/v1/import", "xii", true, true},
      {"POST", "/api/v1/export", "", false, true},
      {"POST", "/api/v1/attachments", "", true, true},
      {"GET", "/api/v1/attachments/{sha}", "", false, true},
      {"GET", "/api/v1/search", "", false, true},
      {"GET", "/api/v1/map", "", false, true},
      {"GET", "/api/v1/geo/lookup", "", false, true},
      {"GET", "/api/v1/queries", "", false, true},
      {"POST", "/api/v1/queries", "", true, true},
      {"POST", "/api/v1/queries/{q}/run", "", false, true},
      {"DELETE", "/api/v1/queries/{q}", "", true, true},
      {"GET", "/api/v1/vocab", "", false, true},
      {"GET", "/api/v1/vocab/thesauri/{t}", "", false, true},
      {"GET", "/api/v1/vocab/thesauri/{t}/skos", "", false, true},
      {"POST", "/api/v1/vocab/thesauri/{t}/concepts", "", true, true},
      {"PUT", "/api/v1/vocab/thesauri/{t}/concepts/{c}/broader", "", true, true},
      {"DELETE", "/api/v1/vocab/thesauri/{t}/concepts/{c}/broader/{b}", "", true, true},
      {"GET", "/api/v1/vocab/{v}", "", false, true},
      {"POST", "/api/v1/vocab/{v}/terms", "", true, true},
      {"PUT", "/api/v1/vocab/{v}/terms/{term}", "", true, true},
      {"GET", "/api/v1/vocab/{v}/duplicates", "", false, true},
      {"POST", "/api/v1/vocab/{v}/merge", "", true, true},
      {"GET", "/api/v1/vocab/{v}/export", "", false, true},
      {"POST", "/api/v1/vocab/{v}/import", "", true, true},
      {"GET", "/api/v1/{type}", "", false, true},
      {"POST", "/api/v1/{type}", "i", true, true},
      {"GET", "/api/v1/{type}/rows", "", false, true},
      {"POST", "/api/v1/{type}/query", "", false, true},
  };
  return table;
}

namespace {

// "{id}" style placeholders become capture groups. Type names start upper
// case so they never shadow the fixed lower-case routes.
std::string to_regex(const std::string& pattern) {
  std::string out;
  for (size_t i = 0; i < pattern.size(); ++i) {
    if (pattern[i] == '{') {
      auto close = pattern.find('}', i);
      out += pattern.substr(i + 1, close - i - 1) == "type" ? "([A-Z][A-Za-z0-9]*)" : "([^/]+)";
      i = close;
    } else if (pattern[i] == '.') {
      out += "\\.";
    } else {
      out += pattern[i];
    }
  }
  return out;
}

}  // namespace

struct Server::Impl {
  using Captures = std::vector<std::string>;
  struct Context {
    const httplib::Request& req;
    httplib::Response& res;
    Captures args;
    std::optional<access::User> user;

    const access::User& actor() const { return *user; }
    json body() const {
      if (req.body.empty()) return json::object();
      auto j = json::parse(req.body, nullptr, false);
      if (j.is_discarded()) throw Error(Errc::bad_request, "request body is not valid JSON");
      return j;
    }
    std::string param(const char* key) const { return req.has_param(key) ? req.get_param_value(key) : std::string(); }
    void send(const json& j, int status = 200) {
      res.status = status;
      res.set_content(j.dump(), "application/json");
    }
    void send_text(std::string body, const char* type) { res.set_content(std::move(body), type); }
  };
  using Handler = std::function<void(Context&)>;

  Workspace& ws;
  httplib::Server http;
  std::thread thread;
  std::map<std::pair<std::string, std::string>, Handler> handlers;

  explicit Impl(Workspace& w) : ws(w) {
    define();
    for (const auto& r : routes()) {
      auto it = handlers.find({r.method, r.pattern});
      if (it == handlers.end()) continue;
      auto fn = [this, route = r, handler = it->second](const httplib::Request& req, httplib::Response& res) {
        dispatch(route, handler, req, res);
      };
      const auto rx = to_regex(r.pattern);
      if (r.method == "GET") http.Get(rx, fn);
      else if (r.method == "POST") http.Post(rx, fn);
      else if (r.method == "PUT") http.Put(rx, fn);
      else if (r.method == "DELETE") http.Delete(rx, fn);
    }
  }

  static void send_error(httplib::Response& res, Errc code, const std::string& message,
                         const std::vector<std::string>& details = {}) {
    res.status = http_status(code);
    res.set_content(json{{"code", std::string(to_string(code))}, {"message", message}, {"details", details}}.dump(),
                    "application/json");
  }

  void dispatch(const RouteInfo& route, const Handler& handler, const httplib::Request& req, httplib::Response& res) {
    Context ctx{req, res, {}, std::nullopt};
    for (size_t i = 1; i < req.matches.size(); ++i) ctx.args.push_back(req.matches[i].str());
    try {
      if (route.authenticated) {
        auto header = req.get_header_value("Authorization");
        if (!header.starts_with("Bearer ")) throw Error(Errc::authentication_failed, "missing bearer token");
        ctx.user = ws.access().authenticate(header.substr(7));
        if (!ctx.user) throw Error(Errc::authentication_failed, "unknown or expired token");
      }
      handler(ctx);
    } catch (const Error& e) {
      send_error(res, e.code(), e.what(), e.details());
    } catch (const json::exception& e) {
      send_error(res, Errc::bad_request, e.what());
    } catch (const std::exception& e) {
      send_error(res, Errc::io, e.what());
    }
  }

  void on(const std::string& method, const std::string& pattern, Handler h) {
    handlers[{method, pattern}] = std::move(h);
  }

  std::string require_org(const Context& c, const json& body) const {
    auto org = body.is_object() ? str(body, "org", false) : std::string();
    if (org.empty()) org = c.param("org");
    if (org.empty()) org = c.actor().org_id;
    if (org.empty()) throw Error(Errc::bad_request, "no organisation given");
    return org;
  }

  void require_vocab_admin(const access::User& u) const {
    auto d = ws.access().authorize(u, access::Action::manage_vocab, access::Resource::global());
    if (!d) throw Error(Errc::insufficient_role, "vocabulary management denied: " + d.reason);
  }

  void define();
};

void Server::Impl::define() {
  using access::Action;

  // Sessions and public surface
  on("POST", "/api/v1/login", [this](Context& c) {
    auto b = c.body();
    auto token = ws.access().login(str(b, "user"), str(b, "password"));
    c.send({{"token", token}, {"user", user_json(ws.access().require_user(str(b, "user")))}});
  });
  on("POST", "/api/v1/logout", [this](Context& c) {
    ws.access().logout(c.req.get_header_value("Authorization").substr(7));
    c.send({{"ok", true}});
  });
  on("GET", "/api/v1/parse-date", [](Context& c) {
    c.send_text(time_expression_json(c.param("expr")), "application/json");
  });
  on("GET", "/api/v1/public/entities/{id}", [this](Context& c) {
    auto doc = ws.public_view(c.args[0]);
    if (!doc) throw Error(Errc::unknown_entity, "no public entity '" + c.args[0] + "'");
    c.send(entity_json(*doc, ws.schemas().latest(doc->type_name).get()));
  });

  // Types
  on("GET", "/api/v1/types", [this](Context& c) {
    json out = json::array();
    for (const auto& s : ws.schemas().all_latest())
      out.push_back({{"name", s->type_name}, {"prefix", s->id_prefix}, {"version", s->version}, {"label", s->label}});
    c.send(out);
  });
  on("GET", "/api/v1/types/{type}/schema", [this](Context& c) {
    auto s = ws.schemas().require(c.args[0]);
    if (auto v = c.param("version"); !v.empty()) {
      s = ws.schemas().at(c.args[0], std::atoi(v.c_str()));
      if (!s) throw Error(Errc::unknown_version, "no such schema version");
    }
    c.send_text(schema::serialize_schema(*s), "application/xml");
  });

  // Administration
  on("POST", "/api/v1/admin/orgs", [this](Context& c) {
    auto b = c.body();
    auto p = ws.provision(c.actor(), access::CreateOrg{str(b, "id"), str(b, "name", false)});
    c.send({{"id", p.principal_id}}, 201);
  });
  on("PUT", "/api/v1/admin/orgs/{org}", [this](Context& c) {
    auto b = c.body();
    auto org = ws.access().find_org(c.args[0]);
    if (!org) throw Error(Errc::unknown_org, "unknown organisation '" + c.args[0] + "'");
    org->editors_edit_all = b.value("editorsEditAll", org->editors_edit_all);
    org->org_admins_edit_all = b.value("orgAdminsEditAll", org->org_admins_edit_all);
    org->public_read = b.value("publicRead", org->public_read);
    ws.access().set_org_flags(c.actor(), *org);
    ws.persist_admin();
    c.send({{"id", org->org_id},
            {"editorsEditAll", org->editors_edit_all},
            {"orgAdminsEditAll", org->org_admins_edit_all},
            {"publicRead", org->public_read}});
  });
  on("POST", "/api/v1/admin/users", [this](Context& c) {
    auto b = c.body();
    auto role = access::role_from_string(b.value("role", "editor"));
    if (!role) throw Error(Errc::bad_request, "unknown role");
    access::CreateUser cmd{str(b, "name"), str(b, "displayName", false), *role, str(b, "org", false)};
    auto p = ws.provision(c.actor(), cmd);
    c.send({{"id", p.principal_id}, {"credential", p.initial_credential}}, 201);
  });

  // Entities
  on("GET", "/api/v1/{type}", [this](Context& c) {
    ws.schemas().require(c.args[0]);
    json rows = json::array();
    for (const auto& r : ws.query().filter_rows(c.args[0], c.param("filter"), c.actor()))
      rows.push_back({{"id", r.id}, {"status", r.status}, {"creator", r.creator}, {"cells", r.cells}});
    c.send({{"rows", rows}});
  });
  on("GET", "/api/v1/{type}/rows", [this](Context& c) {
    auto schema = ws.schemas().require(c.args[0]);
    json columns = json::array();
    for (const auto& col : schema->summary_columns) columns.push_back(col.str());
    json rows = json::array();
    for (const auto& r : ws.query().filter_rows(c.args[0], c.param("filter"), c.actor()))
      rows.push_back({{"id", r.id}, {"status", r.status}, {"creator", r.creator}, {"cells", r.cells}});
    c.send({{"columns", columns}, {"rows", rows}});
  });
  on("POST", "/api/v1/{type}", [this](Context& c) {
    auto b = c.body();
    auto doc = ws.store().create_entity(c.args[0], require_org(c, b), c.actor());
    if (b.contains("values") && b["values"].is_array() && !b["values"].empty()) {
      std::vector<docs::Edit> edits;
      try {
        for (const auto& v : b["values"])
          edits.push_back({schema::FieldPath::parse(str(v, "path")), value_from_json(v, ws)});
        ws.store().apply_field_edits(doc.id, edits, doc.revision, c.actor());
      } catch (...) {
        // Create-with-values is all or nothing.
        ws.store().delete_entities({doc.id}, c.actor());
        throw;
      }
      doc = ws.store().get(doc.id);
    }
    c.send(entity_json(doc, ws.schemas().latest(doc.type_name).get()), 201);
  });
  on("POST", "/api/v1/{type}/query", [this](Context& c) {
    auto preds = query::parse_predicates(c.req.body);
    c.send({{"ids", ws.query().advanced_search(c.args[0], preds, c.actor())}});
  });

  on("GET", "/api/v1/entities/{id}", [this](Context& c) {
    auto doc = ws.store().view(c.args[0], c.actor());
    c.send(entity_json(doc, ws.schemas().latest(doc.type_name).get()));
  });
  on("PUT", "/api/v1/entities/{id}", [this](Context& c) {
    auto b = c.body();
    if (!b.contains("revision") || !b["revision"].is_number_integer())
      throw Error(Errc::bad_request, "'revision' is required");
    std::vector<docs::Edit> edits;
    for (const auto& e : b.value("edits", json::array())) {
      docs::Edit edit{schema::FieldPath::parse(str(e, "path")), std::nullopt};
      if (e.contains("value") && !e["value"].is_null()) edit.value = value_from_json(e["value"], ws);
      edits.push_back(std::move(edit));
    }
    int rev = ws.store().apply_field_edits(c.args[0], edits, b["revision"].get<int>(), c.actor());
    c.send({{"id", c.args[0]}, {"revision", rev}});
  });
  on("DELETE", "/api/v1/entities/{id}", [this](Context& c) {
    auto report = ws.store().delete_entities({c.args[0]}, c.actor());
    if (!report.failures.empty()) {
      const auto& f = report.failures.front();
      Errc code = Errc::permission_denied;
      for (auto candidate : {Errc::unknown_entity, Errc::cross_org, Errc::insufficient_role, Errc::permission_denied})
        if (to_string(candidate) == f.code) code = candidate;
      throw Error(code, f.message);
    }
    ws.persist_admin();
    json dangling = json::array();
    for (const auto& d : report.deleted)
      for (const auto& b : d.dangling) dangling.push_back({{"referrer", b.referrer_id}, {"path", b.path.str()}});
    c.send({{"deleted", c.args[0]}, {"dangling", dangling}});
  });
  on("POST", "/api/v1/entities/{id}/status", [this](Context& c) {
    auto status = docs::status_from_string(str(c.body(), "status"));
    if (!status) throw Error(Errc::bad_request, "unknown status");
    c.send({{"id", c.args[0]}, {"status", std::string(docs::to_string(ws.store().transition_status(c.args[0], *status, c.actor())))}});
  });
  on("POST", "/api/v1/entities/{id}/versions", [this](Context& c) {
    c.send({{"id", c.args[0]}, {"version", ws.store().snapshot_version(c.args[0], c.actor())}}, 201);
  });
  on("GET", "/api/v1/entities/{id}/versions", [this](Context& c) {
    ws.store().view(c.args[0], c.actor());
    c.send({{"id", c.args[0]}, {"versions", ws.store().list_versions(c.args[0])}});
  });
  on("GET", "/api/v1/entities/{id}/versions/{n}", [this](Context& c) {
    ws.store().view(c.args[0], c.actor());
    c.send_text(ws.store().get_version(c.args[0], std::atoi(c.args[1].c_str())).xml, "application/xml");
  });
  on("POST", "/api/v1/entities/{id}/copy", [this](Context& c) {
    auto doc = ws.store().copy_entity(c.args[0], c.actor());
    c.send(entity_json(doc, ws.schemas().latest(doc.type_name).get()), 201);
  });
  on("POST", "/api/v1/entities/{id}/grants", [this](Context& c) {
    auto doc = ws.store().get(c.args[0]);
    auto g = ws.access().grant_edit(c.actor(), doc.resource(), str(c.body(), "user"));
    ws.persist_admin();
    c.send({{"entity", g.entity_id}, {"grantee", g.grantee_user_id}, {"grantedBy", g.granted_by}, {"at", g.granted_at}}, 201);
  });
  on("DELETE", "/api/v1/entities/{id}/grants/{user}", [this](Context& c) {
    auto doc = ws.store().get(c.args[0]);
    ws.access().revoke_edit(c.actor(), doc.resource(), c.args[1]);
    ws.persist_admin();
    c.send({{"ok", true}});
  });
  on("GET", "/api/v1/entities/{id}/export", [this](Context& c) {
    auto format = export_format_from_string(c.param("format").empty() ? "xml" : c.param("format"));
    if (!format) throw Error(Errc::bad_request, "format is xml, rdf-nt or rdf-ttl");
    if (*format == ExportFormat::xml) {
      c.send_text(ws.store().export_entity_xml(c.args[0], c.actor()), "application/xml");
      return;
    }
    ExportOptions options;
    options.naive_only = c.param("naive") == "1" || c.param("naive") == "true";
    auto doc = ws.store().view(c.args[0], c.actor());
    auto graph = ws.entity_graph(doc, options);
    if (*format == ExportFormat::ntriples) {
      c.send_text(rdf::to_ntriples(graph), "application/n-triples");
    } else {
      auto prefixes = rdf::standard_prefixes();
      if (auto it = ws.mappings().find(doc.type_name); it != ws.mappings().end())
        prefixes.insert(it->second.prefixes.begin(), it->second.prefixes.end());
      c.send_text(rdf::to_turtle(graph, prefixes), "text/turtle");
    }
  });
  on("GET", "/api/v1/entities/{id}/backlinks", [this](Context& c) {
    ws.store().view(c.args[0], c.actor());
    const auto state = ws.access().snapshot();
    json out = json::array();
    for (const auto& b : ws.query().backlinks(c.args[0])) {
      auto referrer = ws.store().find(b.referrer_id);
      if (referrer && access::authorize(c.actor(), Action::view, referrer->resource(), state))
        out.push_back({{"referrer", b.referrer_id}, {"type", referrer->type_name}, {"path", b.path.str()}});
    }
    json outbound = json::array();
    for (const auto& [path, link] : docs::outbound_links(ws.store().get(c.args[0])))
      outbound.push_back({{"target", link.target_id}, {"type", link.target_type}, {"path", path.str()}});
    c.send({{"id", c.args[0]}, {"backlinks", out}, {"outbound", outbound}});
  });
  on("GET", "/api/v1/entities/{id}/validate", [this](Context& c) {
    ws.store().view(c.args[0], c.actor());
    c.send({{"id", c.args[0]}, {"issues", issues_json(ws.store().validate(c.args[0]))}});
  });

  on("POST", "/api/v1/import", [this](Context& c) {
    docs::ImportOptions options;
    if (c.param("links") == "lenient") options.links = docs::ImportOptions::Links::lenient;
    options.preserve_id = c.param("preserveId") == "1" || c.param("preserveId") == "true";
    auto result = ws.store().import_entity_xml(c.req.body, require_org(c, json::object()), c.actor(), options);
    json dangling = json::array();
    for (const auto& d : result.dangling) dangling.push_back(d.path.str());
    c.send({{"id", result.document.id}, {"type", result.document.type_name}, {"dangling", dangling}}, 201);
  });
  on("POST", "/api/v1/export", [this](Context& c) {
    auto b = c.body();
    ExportScope scope;
    if (b.contains("ids")) scope.entity_ids = b["ids"].get<std::vector<std::string>>();
    if (auto org = str(b, "org", false); !org.empty()) scope.org_id = org;
    if (auto type = str(b, "type", false); !type.empty()) scope.type_name = type;
    ExportOptions options;
    auto format = export_format_from_string(b.value("format", "xml"));
    if (!format) throw Error(Errc::bad_request, "format is xml, rdf-nt or rdf-ttl");
    options.format = *format;
    options.naive_only = b.value("naive", false);
    auto archive = ws.export_dataset(scope, options, c.actor());
    c.send({{"files", archive.files}, {"excluded", archive.excluded}, {"naiveTypes", archive.naive_types}});
  });

  on("POST", "/api/v1/attachments", [this](Context& c) {
    auto d = ws.access().authorize(c.actor(), Action::create, access::Resource::organisation(c.actor().org_id));
    if (!d) throw Error(Errc::permission_denied, "upload denied: " + d.reason);
    c.send({{"id", ws.store().put_attachment(c.req.body)}}, 201);
  });
  on("GET", "/api/v1/attachments/{sha}", [this](Context& c) {
    auto bytes = ws.store().get_attachment(c.args[0]);
    if (!bytes) throw Error(Errc::unknown_entity, "unknown attachment");
    c.send_text(std::move(*bytes), "application/octet-stream");
  });

  // Search
  on("GET", "/api/v1/search", [this](Context& c) {
    std::optional<std::set<std::string>> types;
    if (auto t = c.param("types"); !t.empty()) {
      auto parts = text::split(t, ',');
      types = std::set<std::string>(parts.begin(), parts.end());
    }
    json hits = json::array();
    for (const auto& h : ws.query().keyword_search(c.param("q"), types, c.actor()))
      hits.push_back({{"id", h.id}, {"type", h.type_name}, {"score", h.score}});
    c.send({{"hits", hits}});
  });
  on("GET", "/api/v1/map", [this](Context& c) {
    auto ids = c.param("ids").empty() ? std::vector<std::string>{} : text::split(c.param("ids"), ',');
    c.send(features_json(ws.assemble_map_features(ids, c.actor())));
  });
  on("GET", "/api/v1/geo/lookup", [this](Context& c) {
    json out = json::array();
    for (const auto& r : ws.geo().lookup(c.param("name"), c.param("source").empty() ? "geonames" : c.param("source")))
      out.push_back({{"source", std::string(docs::to_string(r.source))},
                     {"id", r.external_id},
                     {"name", r.name},
                     {"lat", r.lat},
                     {"lon", r.lon},
                     {"kind", r.kind}});
    c.send({{"records", out}});
  });

  // Saved queries
  on("GET", "/api/v1/queries", [this](Context& c) {
    json out = json::array();
    for (const auto& q : ws.query().list_queries(c.actor())) out.push_back(saved_query_json(q));
    c.send({{"queries", out}});
  });
  on("POST", "/api/v1/queries", [this](Context& c) {
    auto b = c.body();
    auto preds = query::parse_predicates(b.value("predicates", json::array()).dump());
    auto q = ws.query().save_query(str(b, "name"), str(b, "type"), preds, b.value("shared", false), c.actor());
    c.send(saved_query_json(q), 201);
  });
  on("POST", "/api/v1/queries/{q}/run", [this](Context& c) {
    c.send({{"ids", ws.query().run_query(c.args[0], c.actor())}});
  });
  on("DELETE", "/api/v1/queries/{q}", [this](Context& c) {
    ws.query().delete_query(c.args[0], c.actor());
    c.send({{"ok", true}});
  });

  // Vocabularies and thesauri
  on("GET", "/api/v1/vocab", [this](Context& c) {
    json vocabularies = json::object();
    for (const auto& [id, mode] : ws.vocabularies().catalog()) vocabularies[id] = std::string(schema::to_string(mode));
    c.send({{"vocabularies", vocabularies}, {"thesauri", ws.vocabularies().thesaurus_ids()}});
  });
  auto thesaurus = [this](const std::string& id) {
    auto t = ws.vocabularies().thesaurus(id);
    if (!t) throw Error(Errc::unknown_vocabulary, "unknown thesaurus '" + id + "'");
    return *t;
  };
  on("GET", "/api/v1/vocab/thesauri/{t}", [thesaurus](Context& c) { c.send(thesaurus_json(thesaurus(c.args[0]))); });
  on("GET", "/api/v1/vocab/thesauri/{t}/skos", [this, thesaurus](Context& c) {
    auto g = vocab::export_thesaurus_skos(thesaurus(c.args[0]), ws.base_iri());
    if (c.param("format") == "rdf-nt" || c.param("format") == "nt")
      c.send_text(rdf::to_ntriples(g), "application/n-triples");
    else
      c.send_text(rdf::to_turtle(g, rdf::standard_prefixes()), "text/turtle");
  });
  on("POST", "/api/v1/vocab/thesauri/{t}/concepts", [this](Context& c) {
    auto b = c.body();
    vocab::ThesaurusConcept concept_;
    concept_.concept_id = str(b, "id");
    concept_.pref_labels[b.value("lang", "en")] = str(b, "label");
    for (const auto& br : b.value("broader", json::array())) concept_.broader.insert(br.get<std::string>());
    auto out = ws.vocabularies().manage_thesaurus(c.args[0], vocab::AddConcept{concept_}, c.actor());
    ws.persist_admin();
    c.send({{"id", out.concept_id}, {"broader", out.broader}}, 201);
  });
  on("PUT", "/api/v1/vocab/thesauri/{t}/concepts/{c}/broader", [this](Context& c) {
    auto out = ws.vocabularies().manage_thesaurus(c.args[0], vocab::SetBroader{c.args[1], str(c.body(), "broader")},
                                                  c.actor());
    ws.persist_admin();
    c.send({{"id", out.concept_id}, {"broader", out.broader}});
  });
  on("DELETE", "/api/v1/vocab/thesauri/{t}/concepts/{c}/broader/{b}", [this](Context& c) {
    auto out = ws.vocabularies().manage_thesaurus(c.args[0], vocab::RemoveBroader{c.args[1], c.args[2]}, c.actor());
    ws.persist_admin();
    c.send({{"id", out.concept_id}, {"broader", out.broader}});
  });
  auto vocabulary = [this](const std::string& id) {
    auto v = ws.vocabularies().vocabulary(id);
    if (!v) throw Error(Errc::unknown_vocabulary, "unknown vocabulary '" + id + "'");
    return *v;
  };
  on("GET", "/api/v1/vocab/{v}", [vocabulary](Context& c) { c.send(vocabulary_json(vocabulary(c.args[0]))); });
  on("POST", "/api/v1/vocab/{v}/terms", [this](Context& c) {
    auto b = c.body();
    auto r = ws.vocabularies().add_term(c.args[0], str(b, "label"), b.value("lang", "en"), c.actor());
    ws.persist_admin();
    c.send({{"id", r.term_id}, {"created", r.created}}, r.created ? 201 : 200);
  });
  on("PUT", "/api/v1/vocab/{v}/terms/{term}", [this](Context& c) {
    auto b = c.body();
    ws.vocabularies().set_label(c.args[0], c.args[1], b.value("lang", "en"), str(b, "label"), c.actor());
    ws.persist_admin();
    c.send({{"id", c.args[1]}});
  });
  on("GET", "/api/v1/vocab/{v}/duplicates", [this](Context& c) {
    require_vocab_admin(c.actor());
    c.send({{"clusters", ws.vocabularies().find_duplicate_candidates(c.args[0])}});
  });
  on("POST", "/api/v1/vocab/{v}/merge", [this](Context& c) {
    auto b = c.body();
    auto losers = b.value("losers", std::vector<std::string>{});
    auto report = curation::merge_terms(ws.vocabularies(), ws.store(), c.args[0], str(b, "winner"), losers, c.actor());
    ws.persist_admin();
    c.send({{"vocab", report.vocab_id},
            {"winner", report.winner},
            {"losers", report.losers},
            {"touched", report.touched_documents},
            {"rewritten", report.rewritten_references}});
  });
  on("GET", "/api/v1/vocab/{v}/export", [this, vocabulary](Context& c) {
    vocabulary(c.args[0]);
    c.send_text(ws.vocabularies().export_vocabulary(c.args[0]), "text/tab-separated-values");
  });
  on("POST", "/api/v1/vocab/{v}/import", [this](Context& c) {
    auto r = ws.vocabularies().import_vocabulary(c.args[0], c.req.body, c.actor());
    ws.persist_admin();
    c.send({{"lines", r.lines}, {"created", r.created}, {"updated", r.updated}, {"unchanged", r.unchanged}});
  });
}

Server::Server(Workspace& workspace) : impl_(std::make_unique<Impl>(workspace)) {}

Server::~Server() { stop(); }

bool Server::listen(const std::string& host, int port) { return impl_->http.listen(host, port); }

int Server::start_background(const std::string& host) {
  int port = impl_->http.bind_to_any_port(host);
  if (port <= 0) throw Error(Errc::io, "could not bind " + host);
  impl_->thread = std::thread([this] { impl_->http.listen_after_bind(); });
  impl_->http.wait_until_ready();
  return port;
}

void Server::stop() {
  if (!impl_) return;
  impl_->http.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace scriptorium::api
