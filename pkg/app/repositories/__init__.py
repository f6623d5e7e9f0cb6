# Repositories package

