// scriptorium: command-line front end over a workspace directory.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "scriptorium/curation.hpp"
#include "scriptorium/fileio.hpp"
#include "scriptorium/server.hpp"
#include "scriptorium/workspace.hpp"

namespace fs = std::filesystem;
using namespace scriptorium;
using json = nlohmann::json;

namespace {

struct Common {
  std::string root = ".";
  std::string share;
  std::string user;
  std::string password;
  std::string base_iri;
};

fs::path default_share() {
  if (const char* env = std::getenv("SCRIPTORIUM_SHARE")) return env;
  if (fs::exists(SCRIPTORIUM_DEFAULT_SHARE)) return SCRIPTORIUM_DEFAULT_SHARE;
  return SCRIPTORIUM_SOURCE_SHARE;
}

std::unique_ptr<Workspace> open(const Common& c) {
  WorkspaceOptions options;
  options.root = c.root;
  options.share_dir = c.share.empty() ? default_share() : fs::path(c.share);
  if (!c.base_iri.empty()) options.base_iri = c.base_iri;
  options.geo = geo::GeoConfig::from_env(options.share_dir / "fixtures" / "gazetteer.tsv");
  return std::make_unique<Workspace>(std::move(options));
}

access::User sign_in(Workspace& ws, const Common& c) {
  std::string secret = c.password;
  if (secret.empty())
    if (const char* env = std::getenv("SCRIPTORIUM_PASSWORD")) secret = env;
  if (c.user.empty()) throw Error(Errc::authentication_failed, "--user is required");
  auto user = ws.access().authenticate(ws.access().login(c.user, secret));
  if (!user) throw Error(Errc::authentication_failed, "login failed");
  return *user;
}

void print_issues(const std::string& subject, const std::vector<Issue>& issues) {
  for (const auto& i : issues)
    std::cout << subject << '\t' << (i.severity == Severity::error ? "error" : "warning") << '\t' << i.code << '\t'
              << i.path << '\t' << i.message << '\n';
}

std::atomic<api::Server*> running_server{nullptr};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scriptorium: collaborative documentation of cultural-heritage entities"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--root", common.root, "Workspace directory")->capture_default_str();
  app.add_option("--share", common.share, "Seed data directory (schemas, vocabularies, mappings)");
  app.add_option("--user", common.user, "Acting user id");
  app.add_option("--password", common.password, "Password (or SCRIPTORIUM_PASSWORD)");
  app.add_option("--base-iri", common.base_iri, "Base IRI for RDF export");

  std::string admin_name = "admin", admin_secret;
  auto* init = app.add_subcommand("init", "Create a workspace and its first system administrator");
  init->add_option("--admin", admin_name)->capture_default_str();
  init->add_option("--admin-password", admin_secret, "Generated when empty");

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve /api/v1 over HTTP");
  serve->add_option("--host", host)->capture_default_str();
  serve->add_option("--port", port)->capture_default_str();

  std::vector<std::string> import_files;
  std::string import_org;
  bool lenient = false, preserve_id = false;
  auto* import = app.add_subcommand("import", "Import entity XML files (operation xii)");
  import->add_option("files", import_files)->required()->check(CLI::ExistingFile);
  import->add_option("--org", import_org, "Target organisation (defaults to the user's)");
  import->add_flag("--lenient-links", lenient, "Keep links whose targets are absent");
  import->add_flag("--preserve-id", preserve_id);

  std::string format = "xml", mapping_file, out_dir, scope_org, scope_type;
  std::vector<std::string> export_ids;
  bool naive = false;
  auto* exp = app.add_subcommand("export", "Export entities as XML or RDF");
  exp->add_option("--format", format)->check(CLI::IsMember({"xml", "rdf-nt", "rdf-ttl"}))->capture_default_str();
  exp->add_option("--mapping", mapping_file)->check(CLI::ExistingFile);
  exp->add_flag("--naive", naive, "Ignore mapping files");
  exp->add_option("--out", out_dir)->required();
  exp->add_option("--org", scope_org);
  exp->add_option("--type", scope_type);
  exp->add_option("ids", export_ids);

  std::vector<std::string> validate_ids;
  auto* validate = app.add_subcommand("validate", "Check seed schemas, mappings and stored documents");
  validate->add_option("ids", validate_ids, "Entities to check; everything when empty");

  auto* vocab_cmd = app.add_subcommand("vocab", "Vocabulary administration");
  vocab_cmd->require_subcommand(1);
  std::string vocab_id, tsv_file, winner;
  std::vector<std::string> losers;
  auto* vocab_list = vocab_cmd->add_subcommand("list", "List vocabularies and thesauri");
  auto* vocab_export = vocab_cmd->add_subcommand("export", "Print a vocabulary as TSV");
  vocab_export->add_option("vocab", vocab_id)->required();
  auto* vocab_import = vocab_cmd->add_subcommand("import", "Load terms from a TSV file");
  vocab_import->add_option("vocab", vocab_id)->required();
  vocab_import->add_option("file", tsv_file)->required()->check(CLI::ExistingFile);
  auto* vocab_dups = vocab_cmd->add_subcommand("duplicates", "Show duplicate-candidate clusters");
  vocab_dups->add_option("vocab", vocab_id)->required();
  auto* vocab_merge = vocab_cmd->add_subcommand("merge", "Merge terms into a winner and rewrite references");
  vocab_merge->add_option("vocab", vocab_id)->required();
  vocab_merge->add_option("winner", winner)->required();
  vocab_merge->add_option("losers", losers)->required();

  std::string expr;
  auto* parse_date = app.add_subcommand("parse-date", "Parse a time expression and print its span as JSON");
  parse_date->add_option("expr", expr)->required();

  auto* rebuild = app.add_subcommand("rebuild-index", "Rebuild the search indexes from the store");

  auto* provision = app.add_subcommand("provision", "Create organisations and users");
  provision->require_subcommand(1);
  std::string org_id, org_name, new_user, display_name, role = "editor";
  auto* prov_org = provision->add_subcommand("org");
  prov_org->add_option("id", org_id)->required();
  prov_org->add_option("--name", org_name);
  auto* prov_user = provision->add_subcommand("user");
  prov_user->add_option("name", new_user)->required();
  prov_user->add_option("--display-name", display_name);
  prov_user->add_option("--role", role)->check(CLI::IsMember({"system-admin", "org-admin", "editor", "guest"}))
      ->capture_default_str();
  prov_user->add_option("--org", org_id);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*parse_date) {
      std::cout << api::time_expression_json(expr) << '\n';
      return 0;
    }
    if (*init) {
      auto p = Workspace::init(common.root, admin_name, admin_secret);
      std::cout << "user\t" << p.principal_id << "\npassword\t" << p.initial_credential << '\n';
      return 0;
    }

    auto ws = open(common);

    if (*serve) {
      api::Server server(*ws);
      running_server = &server;
      auto on_signal = [](int) {
        if (auto* s = running_server.load()) s->stop();
      };
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cerr << "listening on http://" << host << ':' << port << "/api/v1\n";
      bool ok = server.listen(host, port);
      running_server = nullptr;
      return ok ? 0 : 1;
    }
    if (*rebuild) {
      auto t0 = std::chrono::steady_clock::now();
      auto stats = ws->query().rebuild_index();
      auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      std::cout << "entities\t" << stats.entities << "\ntokens\t" << stats.tokens << "\nlinks\t" << stats.links
                << "\nmillis\t" << ms << '\n';
      return 0;
    }
    if (*validate) {
      bool errors = false;
      schema::Catalog catalog;
      for (const auto& s : ws->schemas().all_latest()) catalog.entity_types.insert(s->type_name);
      catalog.vocabularies = ws->vocabularies().catalog();
      for (const auto& t : ws->vocabularies().thesaurus_ids()) catalog.thesauri.insert(t);
      if (validate_ids.empty()) {
        for (const auto& s : ws->schemas().all_latest()) {
          auto issues = schema::validate_schema(*s, catalog);
          errors |= has_errors(issues);
          print_issues("schema:" + s->type_name, issues);
        }
        for (const auto& [type, spec] : ws->mappings()) {
          auto issues = mapping::validate_mapping(spec, *ws->schemas().require(type), ws->ontology());
          errors |= has_errors(issues);
          print_issues("mapping:" + type, issues);
        }
        for (const auto& doc : ws->store().all()) validate_ids.push_back(doc->id);
      }
      for (const auto& id : validate_ids) {
        auto issues = ws->store().validate(id);
        errors |= has_errors(issues);
        print_issues(id, issues);
      }
      return errors ? 1 : 0;
    }

    auto actor = sign_in(*ws, common);

    if (*import) {
      docs::ImportOptions options;
      options.links = lenient ? docs::ImportOptions::Links::lenient : docs::ImportOptions::Links::strict;
      options.preserve_id = preserve_id;
      const auto org = import_org.empty() ? actor.org_id : import_org;
      for (const auto& file : import_files) {
        auto r = ws->store().import_entity_xml(fileio::read_file(file), org, actor, options);
        std::cout << file << '\t' << r.document.id << '\t' << r.dangling.size() << " dangling\n";
      }
      return 0;
    }
    if (*exp) {
      ExportScope scope;
      scope.entity_ids = export_ids;
      if (!scope_org.empty()) scope.org_id = scope_org;
      if (!scope_type.empty()) scope.type_name = scope_type;
      ExportOptions options;
      options.format = *export_format_from_string(format);
      options.naive_only = naive;
      if (!mapping_file.empty()) options.mapping = mapping::load_mapping(mapping_file);
      auto archive = ws->export_dataset(scope, options, actor);
      archive.write_to(out_dir);
      std::cout << archive.files.size() << " files written to " << out_dir << '\n';
      for (const auto& id : archive.excluded) std::cerr << "excluded\t" << id << '\n';
      return 0;
    }
    if (*vocab_cmd) {
      if (*vocab_list) {
        for (const auto& [id, mode] : ws->vocabularies().catalog()) std::cout << id << '\t' << schema::to_string(mode) << '\n';
        for (const auto& id : ws->vocabularies().thesaurus_ids()) std::cout << id << "\tthesaurus\n";
      } else if (*vocab_export) {
        std::cout << ws->vocabularies().export_vocabulary(vocab_id);
      } else if (*vocab_import) {
        auto r = ws->vocabularies().import_vocabulary(vocab_id, fileio::read_file(tsv_file), actor);
        ws->persist_admin();
        std::cout << "created\t" << r.created << "\nupdated\t" << r.updated << "\nunchanged\t" << r.unchanged << '\n';
      } else if (*vocab_dups) {
        if (!ws->access().authorize(actor, access::Action::manage_vocab, access::Resource::global()))
          throw Error(Errc::insufficient_role, "vocabulary management denied");
        for (const auto& cluster : ws->vocabularies().find_duplicate_candidates(vocab_id)) {
          for (size_t i = 0; i < cluster.size(); ++i) std::cout << (i ? "\t" : "") << cluster[i];
          std::cout << '\n';
        }
      } else if (*vocab_merge) {
        auto r = curation::merge_terms(ws->vocabularies(), ws->store(), vocab_id, winner, losers, actor);
        ws->persist_admin();
        std::cout << "documents\t" << r.touched_documents.size() << "\nreferences\t" << r.rewritten_references << '\n';
      }
      return 0;
    }
    if (*provision) {
      access::Provisioned p;
      if (*prov_org) {
        p = ws->provision(actor, access::CreateOrg{org_id, org_name});
      } else {
        p = ws->provision(actor, access::CreateUser{new_user, display_name, *access::role_from_string(role), org_id});
      }
      std::cout << p.principal_id;
      if (!p.initial_credential.empty()) std::cout << '\t' << p.initial_credential;
      std::cout << '\n';
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    for (const auto& d : e.details()) std::cerr << "  " << d << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
