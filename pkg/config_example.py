#!/usr/bin/env python3
"""
📋 CONFIGURAZIONE ESEMPIO - Rilevamento FPGA Riciclati
Elenco documentato delle variabili d'ambiente lette da config/detection_config.py
"""

# Copia i valori che vuoi cambiare in un file .env nella directory di lavoro
# (letto con python-dotenv) oppure esportali nella shell.
# Le variabili non impostate usano i default indicati qui.

import os

# ==================== uLSIF ====================

# Moltiplicatori della mediana delle distanze per la griglia di w
RFD_ULSIF_WIDTH_MULTIPLIERS = "1,2,4"

# Griglia di λ
RFD_ULSIF_LAMBDA_GRID = "0.001,0.01,0.1,1,10"

# Numero massimo di centri del kernel (sottoinsieme equispaziato del campione di test)
RFD_ULSIF_MAX_CENTERS = 100

# Pavimento di r̂ prima del logaritmo
RFD_ULSIF_RATIO_FLOOR = 1e-12

# w usata quando tutte le distanze a coppie sono nulle (MHz)
RFD_ULSIF_FALLBACK_WIDTH = 1.0

# "analytic" (formula leave-one-out chiusa) oppure "explicit" (riadattamento per ogni campione, lento)
RFD_ULSIF_LOOCV = "analytic"

# ==================== BASELINE K-MEANS++ ====================

RFD_BASELINE_K_MAX = 4
RFD_BASELINE_REFERENCE_K = 2
RFD_KMEANS_MAX_ITER = 300
RFD_KMEANS_TOL = 1e-9

# ==================== SIMULAZIONE ====================

RFD_REFERENCE_CONFIG = "configs/reference_simulation.json"
RFD_REFERENCE_LAYOUT = "configs/reference_layout.json"

# ==================== RUNTIME ====================

# Processi per il calcolo dei punteggi (default: numero di CPU; 1 = sequenziale)
RFD_WORKERS = os.cpu_count() or 1
RFD_LOG_LEVEL = "INFO"

# ==================== ISTRUZIONI ====================

"""
ISTRUZIONI PER LA CONFIGURAZIONE:

1. Crea un file .env nella directory da cui lanci app.py
2. Scrivi una riga VARIABILE=valore per ogni impostazione da cambiare, ad esempio:

RFD_WORKERS=4
RFD_LOG_LEVEL=DEBUG

3. Le variabili già presenti nell'ambiente hanno la precedenza sul file .env
4. Un valore non convertibile (es. RFD_WORKERS=molti) fa fallire l'avvio con ConfigurationError

I parametri della simulazione (variazione di processo, regioni di invecchiamento,
coorte, seed) stanno invece nel file JSON indicato da RFD_REFERENCE_CONFIG;
lo schema è in docs/simulation_config.schema.json.
"""
