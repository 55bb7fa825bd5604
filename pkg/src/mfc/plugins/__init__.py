from mfc.plugins.readers import kernel_csv
from mfc.plugins.readers import measure_json
from mfc.plugins.readers import profile_csv
from mfc.plugins.readers import space_csv
from mfc.plugins.writers import csv_writer
from mfc.plugins.writers import json_writer
