/*
 * Copyright 2026 The Rendezvous Solver Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RENDEZVOUS_RENDEZVOUS_H
#define RENDEZVOUS_RENDEZVOUS_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(RDV_BUILDING_SHARED)
#define RDV_API __attribute__((visibility("default")))
#else
#define RDV_API
#endif

typedef enum rdv_status {
    RDV_OK = 0,
    RDV_ERR_PARSE = 1,
    RDV_ERR_INVALID_GRAPH = 2,
    RDV_ERR_DISCONNECTED = 3,
    RDV_ERR_INVALID_ARGUMENT = 4,
    RDV_ERR_CONTRACT = 5,
    RDV_ERR_BUDGET = 6,
    RDV_ERR_SIZE_LIMIT = 7,
    RDV_ERR_IO = 8,
    RDV_ERR_INTERNAL = 9
} rdv_status;

typedef struct rdv_instance rdv_instance;

RDV_API const char *rdv_version(void);
RDV_API const char *rdv_status_name(rdv_status status);
/* message of the last failed call on this thread; empty when none */
RDV_API const char *rdv_last_error(void);
/* releases strings returned through char** out parameters */
RDV_API void rdv_string_free(char *s);

RDV_API rdv_status rdv_instance_parse(const char *json, rdv_instance **out);
RDV_API rdv_status rdv_instance_load(const char *path, rdv_instance **out);
RDV_API void rdv_instance_free(rdv_instance *inst);
RDV_API rdv_status rdv_instance_to_json(const rdv_instance *inst, char **out);

/*
 * Options are a JSON object or NULL. solve accepts
 * {"tau", "mode": "auto"|"generic"|"nd-fpt", "budget", "threads", "diagnostics", "export_table"}.
 * Reports are JSON objects. On RDV_ERR_BUDGET, *out may still hold a partial report.
 */
RDV_API rdv_status rdv_solve(const rdv_instance *inst, const char *options, char **out);
/* {"max_k", "budget", "threads"} -> {"d", "lambda", "reason"} */
RDV_API rdv_status rdv_dnumber(const rdv_instance *inst, const char *options, char **out);
/* {"lambda", "separator"} */
RDV_API rdv_status rdv_lambda(const rdv_instance *inst, char **out);
/* recognizer output and neighborhood decomposition */
RDV_API rdv_status rdv_classify(const rdv_instance *inst, char **out);

/* family: "clique-spider" | "path-spider"; params {"p", "k"} -> instance JSON */
RDV_API rdv_status rdv_generate(const char *family, const char *params, char **out);
/* source: "set-cover" | "qbf" | "qbf-unbounded"; input in the matching JSON format */
RDV_API rdv_status rdv_reduce(const char *source, const char *input, char **out);

/* {"tau", "budget"} -> strategy tree JSON */
RDV_API rdv_status rdv_extract_strategy(const rdv_instance *inst, const char *options, char **out);
/* *valid is 1 or 0; *reason is empty when valid */
RDV_API rdv_status rdv_verify_strategy(const rdv_instance *inst, const char *strategy, int tau, int *valid,
                                       char **reason);

/* {"budget", "threads", "log_dir"}; blocks serving the arena HTTP API */
RDV_API rdv_status rdv_serve(const char *host, int port, const char *options);

#ifdef __cplusplus
}
#endif

#endif
